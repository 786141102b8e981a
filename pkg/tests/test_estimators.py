import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import Pipeline

from werma import (
    DomainError,
    EffectiveDimension,
    ProblemSpec,
    WeightedERMClassifier,
    fit_weighted_square,
    generate,
)


def test_classifier_matches_functional_fitter():
    data = generate(ProblemSpec(s=2.0, pi_plus=0.2, delta=0.2), 800, 0)
    clf = WeightedERMClassifier(rho=7.0).fit(data.features, data.labels)
    ref = fit_weighted_square(data, 7.0)
    assert clf.coef_ == pytest.approx(ref.theta, rel=1e-10, abs=1e-12)
    assert clf.intercept_ == pytest.approx(ref.bias, rel=1e-10)
    alpha, gamma, bias = clf.alignment_summary(data.mu)
    assert alpha == pytest.approx(ref.alpha_hat, rel=1e-10)
    assert gamma == pytest.approx(ref.gamma_hat, rel=1e-10)
    assert bias == pytest.approx(ref.bias, rel=1e-10)


def test_classifier_predicts_original_label_values():
    data = generate(ProblemSpec(s=3.0, pi_plus=0.4, delta=0.1), 600, 1)
    y = np.where(data.labels > 0, "pos", "neg")
    clf = WeightedERMClassifier().fit(data.features, y)
    pred = clf.predict(data.features)
    assert set(pred) <= {"pos", "neg"}
    assert (pred == y).mean() > 0.9


def test_classifier_is_cloneable_and_param_roundtrips():
    clf = WeightedERMClassifier(rho=3.5, loss="logistic", tol=1e-5, max_iter=500)
    params = clf.get_params()
    assert params["rho"] == 3.5
    assert params["loss"] == "logistic"
    twin = clone(clf)
    assert twin.get_params() == params
    twin.set_params(rho=1.0)
    assert twin.rho == 1.0


def test_classifier_validates_inputs():
    X = np.ones((4, 2))
    with pytest.raises(DomainError):
        WeightedERMClassifier().fit(X, np.array([1, 1, 1, 1]))  # one class
    with pytest.raises(DomainError):
        WeightedERMClassifier().fit(X, np.array([1, 2, 3, 4]))  # four classes
    data = generate(ProblemSpec(s=2.0, pi_plus=0.3, delta=0.2), 200, 2)
    clf = WeightedERMClassifier().fit(data.features, data.labels)
    with pytest.raises(DomainError):
        clf.decision_function(np.ones((3, data.d + 1)))


def test_score_beats_chance_in_easy_regime():
    train = generate(ProblemSpec(s=3.0, pi_plus=0.5, delta=0.05), 2000, 3)
    test = generate(ProblemSpec(s=3.0, pi_plus=0.5, delta=0.05), 2000, 4)
    clf = WeightedERMClassifier().fit(train.features, train.labels)
    assert clf.score(test.features, test.labels) > 0.95


def test_effective_dimension_transformer_composes():
    rng = np.random.default_rng(5)
    t = rng.standard_normal((300, 2))
    X = np.hstack([10.0 * t, 0.01 * rng.standard_normal((300, 6))])
    est = EffectiveDimension(threshold=0.99).fit(X)
    assert est.effective_dim_ == 2
    projected = est.transform(X)
    assert projected.shape == (300, 2)
    pipe = Pipeline([("dim", EffectiveDimension(threshold=0.99))])
    assert pipe.fit_transform(X).shape == (300, 2)
    assert clone(est).get_params()["threshold"] == 0.99


def test_effective_dimension_transform_checks_width():
    X = np.random.default_rng(6).standard_normal((50, 4))
    est = EffectiveDimension().fit(X)
    with pytest.raises(DomainError):
        est.transform(np.ones((5, 3)))
