import numpy as np
import pytest

from werma import (
    ConvergenceError,
    DomainError,
    LogisticLoss,
    NumericError,
    ProblemSpec,
    SampleSet,
    SquareLoss,
    evaluate,
    fit_weighted_general,
    fit_weighted_square,
    generate,
    qfunc,
    solve_general,
    solve_unweighted_square,
)

HEADLINE = ProblemSpec(s=2.0, pi_plus=0.2, delta=0.2)


# ---------------------------------------------------------------------------
# generation


def test_same_seed_is_bit_identical():
    a = generate(HEADLINE, 500, 42)
    b = generate(HEADLINE, 500, 42)
    assert np.array_equal(a.features, b.features)
    assert np.array_equal(a.labels, b.labels)
    assert a.label_resamples == b.label_resamples


def test_different_seeds_differ():
    a = generate(HEADLINE, 500, 1)
    b = generate(HEADLINE, 500, 2)
    assert not np.array_equal(a.features, b.features)


def test_label_frequency_concentrates():
    data = generate(ProblemSpec(s=2.0, pi_plus=0.5, delta=0.1), 10_000, 0)
    assert abs(float(data.labels.mean())) <= 4.0 / np.sqrt(10_000)


def test_class_conditional_means():
    data = generate(HEADLINE, 1000, 3)
    for sign in (1.0, -1.0):
        rows = data.features[data.labels == sign]
        n_class = rows.shape[0]
        assert abs(float(rows[:, 0].mean()) - sign * 2.0) <= 5.0 / np.sqrt(n_class)
        assert abs(float(rows[:, 1].mean())) <= 5.0 / np.sqrt(n_class)


def test_mu_norm_and_dimension():
    data = generate(HEADLINE, 1000, 0)
    assert data.d == 200
    assert abs(data.s - 2.0) <= 1e-12
    assert data.realized_delta == pytest.approx(0.2)


def test_zero_dimension_rejected():
    with pytest.raises(DomainError):
        generate(ProblemSpec(s=2.0, pi_plus=0.2, delta=0.001), 100, 0)


def test_single_class_draw_is_resampled():
    # tiny n and small prior force occasional single-class draws
    spec = ProblemSpec(s=2.0, pi_plus=0.05, delta=0.5)
    saw_resample = False
    for seed in range(200):
        data = generate(spec, 4, seed)
        assert np.any(data.labels > 0) and np.any(data.labels < 0)
        saw_resample = saw_resample or data.label_resamples > 0
    assert saw_resample


# ---------------------------------------------------------------------------
# exact square fits


def test_weighting_equals_replication():
    data = generate(HEADLINE, 300, 7)
    doubled = SampleSet(
        features=np.vstack([data.features, data.features]),
        labels=np.concatenate([data.labels, data.labels]),
        mu=data.mu, seed=data.seed)
    via_weights = fit_weighted_square(data, 1.0, majority_weight=2.0)
    via_rows = fit_weighted_square(doubled, 1.0)
    assert via_weights.theta == pytest.approx(via_rows.theta, rel=1e-9, abs=1e-12)
    assert via_weights.bias == pytest.approx(via_rows.bias, rel=1e-9, abs=1e-12)


def test_weight_scale_is_irrelevant():
    data = generate(HEADLINE, 400, 11)
    a = fit_weighted_square(data, 3.0)
    b = fit_weighted_square(data, 3.0, majority_weight=2.0)  # (6, 2) vs (3, 1)
    assert a.theta == pytest.approx(b.theta, rel=1e-12, abs=1e-14)
    assert a.bias == pytest.approx(b.bias, rel=1e-12, abs=1e-14)


def test_exact_solution_is_a_strict_minimum():
    data = generate(HEADLINE, 300, 13)
    rho = 2.5
    fit = fit_weighted_square(data, rho)
    design = np.concatenate([data.features * data.labels[:, None],
                             data.labels[:, None]], axis=1)
    w = np.where(data.labels > 0, rho, 1.0)

    def objective(beta):
        return float(np.sum(w * 0.5 * (design @ beta - 1.0) ** 2) / data.n)

    beta = np.concatenate([fit.theta, [fit.bias]])
    base = objective(beta)
    assert base == pytest.approx(fit.objective, rel=1e-12)
    rng = np.random.default_rng(17)
    for _ in range(20):
        direction = rng.standard_normal(beta.shape)
        direction /= np.linalg.norm(direction)
        assert objective(beta + 1e-3 * direction) > base


def test_singular_system_raises():
    # n < d + 1 makes the weighted Gram singular
    data = generate(ProblemSpec(s=2.0, pi_plus=0.3, delta=0.99), 50, 0)
    bigger = SampleSet(features=np.hstack([data.features, data.features]),
                       labels=data.labels,
                       mu=np.concatenate([data.mu, data.mu]) / np.sqrt(2),
                       seed=0)
    with pytest.raises(NumericError):
        fit_weighted_square(bigger, 1.0)


def test_mc_means_match_unweighted_closed_form():
    # 10 seeds at n=4000: mean summary within 3% of the asymptotic solution
    theory = solve_unweighted_square(HEADLINE)
    fits = [fit_weighted_square(generate(HEADLINE, 4000, seed), 1.0)
            for seed in range(10)]
    mean_alpha = float(np.mean([f.alpha_hat for f in fits]))
    mean_gamma = float(np.mean([f.gamma_hat for f in fits]))
    mean_bias = float(np.mean([f.bias for f in fits]))
    assert mean_alpha == pytest.approx(theory.alpha, rel=0.03)
    assert mean_gamma == pytest.approx(theory.gamma, rel=0.03)
    assert mean_bias == pytest.approx(theory.bias, rel=0.03)


def test_mc_equal_error_weight_balances_classes():
    spec = ProblemSpec(s=2.0, pi_plus=0.2, delta=0.2, rho=7.0)
    fits = [fit_weighted_square(generate(spec, 4000, seed), 7.0)
            for seed in range(10)]
    for fit in fits:
        assert abs(fit.bias) < 0.05 * fit.alpha_hat
        risks = evaluate(fit, np.concatenate([[2.0], np.zeros(799)]))
        assert abs(risks.risk_plus - risks.risk_minus) < 0.02


def test_concentration_scales_like_sqrt_n():
    # Pooled seed-to-seed std of the (alpha, gamma, bias) tuple should halve
    # when n quadruples.  Per-component ratios from 10 seeds carry ~25-30%
    # sampling noise, so the check pools the tuple and pins independent seed
    # banks; delta is thinned to keep the n=16000 fits cheap.
    spec = ProblemSpec(s=2.0, pi_plus=0.2, delta=0.05)

    def summaries(n, seeds):
        out = [fit_weighted_square(generate(spec, n, seed), 1.0) for seed in seeds]
        return np.array([[f.alpha_hat, f.gamma_hat, f.bias] for f in out])

    small = summaries(4000, range(10))
    large = summaries(16_000, range(100, 110))
    ratio = float(np.linalg.norm(small.std(axis=0, ddof=1))
                  / np.linalg.norm(large.std(axis=0, ddof=1)))
    assert 1.6 <= ratio <= 2.5


# ---------------------------------------------------------------------------
# gradient-descent fits


def test_gd_square_matches_exact_solver():
    data = generate(HEADLINE, 600, 23)
    exact = fit_weighted_square(data, 2.0)
    gd = fit_weighted_general(data, 2.0, SquareLoss(), grad_tol=1e-8)
    assert gd.alpha_hat == pytest.approx(exact.alpha_hat, abs=1e-5)
    assert gd.gamma_hat == pytest.approx(exact.gamma_hat, abs=1e-5)
    assert gd.bias == pytest.approx(exact.bias, abs=1e-5)


def test_gd_logistic_on_separable_toy_set_flags_nonconvergence():
    # logistic on separable data has no finite minimizer: the descent must
    # end with a max-norm or budget flag, never a silent return
    rng = np.random.default_rng(5)
    X = np.vstack([rng.normal(2.0, 0.1, (10, 3)), rng.normal(-2.0, 0.1, (10, 3))])
    y = np.concatenate([np.ones(10), -np.ones(10)])
    data = SampleSet(features=X, labels=y, mu=np.array([1.0, 0, 0]), seed=0)
    with pytest.raises(ConvergenceError) as info:
        fit_weighted_general(data, 1.0, LogisticLoss(), grad_tol=1e-13,
                             max_iter=3000, norm_cap=5.0)
    assert info.value.residual is not None  # carries the final gradient norm


def test_gd_logistic_matches_general_solver_in_feasible_regime():
    # s = 0.5 keeps the mixture far from the separability boundary, where
    # the finite-n fluctuations of the logistic fit are tame
    spec = ProblemSpec(s=0.5, pi_plus=0.2, delta=0.2, loss=LogisticLoss())
    theory = solve_general(spec)
    fits = [fit_weighted_general(generate(spec, 8000, seed), 1.0, LogisticLoss())
            for seed in range(4)]
    mean_alpha = float(np.mean([f.alpha_hat for f in fits]))
    mean_gamma = float(np.mean([f.gamma_hat for f in fits]))
    mean_bias = float(np.mean([f.bias for f in fits]))
    assert mean_alpha == pytest.approx(theory.alpha, rel=0.05)
    assert mean_gamma == pytest.approx(theory.gamma, rel=0.05)
    assert mean_bias == pytest.approx(theory.bias, rel=0.05)


# ---------------------------------------------------------------------------
# evaluation


def test_evaluate_along_mu():
    mu = np.zeros(5)
    mu[0] = 2.0
    fit_obj = dict(theta=mu.copy(), bias=0.0, alpha_hat=2.0, gamma_hat=2.0,
                   objective=0.0)
    from werma.simulation import FittedClassifier
    fit = FittedClassifier(**fit_obj)
    risks = evaluate(fit, mu)
    assert risks.risk_plus == pytest.approx(float(qfunc(2.0)), rel=1e-12)
    assert risks.risk_minus == pytest.approx(float(qfunc(2.0)), rel=1e-12)
    assert risks.risk_plus == pytest.approx(0.02275, abs=2e-5)


def test_evaluate_orthogonal_direction_is_chance():
    from werma.simulation import FittedClassifier
    mu = np.array([2.0, 0.0, 0.0])
    fit = FittedClassifier(theta=np.array([0.0, 1.0, 0.0]), bias=0.0,
                           alpha_hat=1.0, gamma_hat=0.0, objective=1.0)
    risks = evaluate(fit, mu)
    assert risks.risk_plus == 0.5
    assert risks.risk_minus == 0.5


def test_evaluate_rejects_degenerate_fit():
    from werma.simulation import FittedClassifier
    fit = FittedClassifier(theta=np.zeros(3), bias=0.0, alpha_hat=0.0,
                           gamma_hat=0.0, objective=0.0)
    with pytest.raises(DomainError):
        evaluate(fit, np.array([1.0, 0, 0]))


def test_fitted_majority_beats_minority_in_headline_regime():
    data = generate(HEADLINE, 4000, 31)
    fit = fit_weighted_square(data, 1.0)
    risks = evaluate(fit, data.mu)
    assert risks.risk_minus < risks.risk_plus
