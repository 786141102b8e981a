import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from werma import CustomLoss, DomainError, LogisticLoss, SquareLoss, moreau_envelope
from werma.losses import PROX_TOL

from oracles import central_diff, logistic_loss, prox_oracle

SQ = SquareLoss()
LOGI = LogisticLoss()


def test_square_envelope_at_loss_minimum():
    ev = moreau_envelope(SQ, 1.0, 0.7)
    assert ev.value == 0.0
    assert ev.prox == 1.0
    assert ev.d_x == 0.0


def test_square_envelope_hand_values():
    # x=3, lam=1: value (3-1)^2/(2*2)=1, prox (3+1)/2=2, d_x (3-1)/2=1,
    # d_lambda -(3-1)^2/(2*4)=-0.5, d_xx 1/2
    ev = moreau_envelope(SQ, 3.0, 1.0)
    assert ev.value == pytest.approx(1.0, abs=1e-15)
    assert ev.prox == pytest.approx(2.0, abs=1e-15)
    assert ev.d_x == pytest.approx(1.0, abs=1e-15)
    assert ev.d_lambda == pytest.approx(-0.5, abs=1e-15)
    assert ev.d_xx == pytest.approx(0.5, abs=1e-15)


def test_logistic_prox_matches_bruteforce_oracle():
    ev = moreau_envelope(LOGI, 0.0, 1.0)
    ref = prox_oracle(lambda v: float(logistic_loss(v)), 0.0, 1.0)
    assert ev.prox == pytest.approx(ref, abs=1e-8)


@pytest.mark.parametrize("x", [-7.0, -2.3, -0.4, 0.0, 1.0, 3.7, 12.0])
@pytest.mark.parametrize("lam", [1e-3, 0.1, 1.0, 37.0, 1e3])
def test_logistic_prox_oracle_grid(x, lam):
    ev = moreau_envelope(LOGI, x, lam)
    ref = prox_oracle(lambda v: float(logistic_loss(v)), x, lam)
    assert ev.prox == pytest.approx(ref, abs=1e-7)
    # the optimality residual itself should be at the solver tolerance
    resid = float(LOGI.derivative(ev.prox)) + (ev.prox - x) / lam
    assert abs(resid) <= PROX_TOL


def test_nonpositive_lambda_rejected():
    with pytest.raises(DomainError):
        moreau_envelope(SQ, 1.0, 0.0)
    with pytest.raises(DomainError):
        moreau_envelope(LOGI, 1.0, -2.0)


def _env_grid(seed=7, size=1000):
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-6.0, 6.0, size)
    lams = np.exp(rng.uniform(np.log(1e-3), np.log(1e3), size))
    return xs, lams


def test_square_identities_machine_exact_on_grid():
    xs, lams = _env_grid()
    for x, lam in zip(xs, lams):
        ev = moreau_envelope(SQ, x, lam)
        # formed as -(1/2) d_x^2, so this is bit exact
        assert ev.d_lambda == -0.5 * ev.d_x * ev.d_x
        assert ev.d_x * lam == pytest.approx(x - ev.prox, rel=1e-12, abs=1e-14)


def test_logistic_identities_on_grid():
    xs, lams = _env_grid(seed=8, size=300)
    for x, lam in zip(xs, lams):
        ev = moreau_envelope(LOGI, x, lam)
        assert abs(ev.d_lambda + 0.5 * ev.d_x**2) <= 1e-6
        assert ev.d_x == pytest.approx((x - ev.prox) / lam, abs=1e-6)


@pytest.mark.parametrize("loss", [SQ, LOGI], ids=["square", "logistic"])
def test_envelope_lower_bounds_loss(loss):
    xs, lams = _env_grid(seed=9, size=300)
    for x, lam in zip(xs, lams):
        ev = moreau_envelope(loss, x, lam)
        assert ev.value <= float(loss.value(x)) + 1e-12


@pytest.mark.parametrize("loss", [SQ, LOGI], ids=["square", "logistic"])
def test_envelope_nonincreasing_in_lambda(loss):
    rng = np.random.default_rng(10)
    for _ in range(200):
        x = rng.uniform(-6.0, 6.0)
        lam1 = np.exp(rng.uniform(np.log(1e-3), np.log(1e2)))
        lam2 = lam1 * rng.uniform(1.5, 20.0)
        v1 = moreau_envelope(loss, x, lam1).value
        v2 = moreau_envelope(loss, x, lam2).value
        assert v2 <= v1 + 1e-12


@pytest.mark.parametrize("loss", [SQ, LOGI], ids=["square", "logistic"])
def test_finite_difference_consistency(loss):
    # d_x and d_lambda vs central differences of the value, step 1e-5
    rng = np.random.default_rng(11)
    h = 1e-5
    for _ in range(120):
        x = rng.uniform(-5.0, 5.0)
        lam = np.exp(rng.uniform(np.log(1e-2), np.log(1e2)))
        ev = moreau_envelope(loss, x, lam)
        fd_x = central_diff(lambda t: moreau_envelope(loss, t, lam).value, x, h)
        fd_l = central_diff(lambda t: moreau_envelope(loss, x, t).value, lam, h * lam)
        assert fd_x == pytest.approx(ev.d_x, rel=1e-4, abs=1e-6)
        assert fd_l == pytest.approx(ev.d_lambda, rel=1e-4, abs=1e-6)


@given(x=st.floats(-20, 20), lam=st.floats(1e-3, 1e3))
@settings(max_examples=150, deadline=None)
def test_square_closed_forms_property(x, lam):
    ev = moreau_envelope(SQ, x, lam)
    assert ev.value == pytest.approx(0.5 * (x - 1) ** 2 / (1 + lam), rel=1e-12, abs=1e-12)
    assert ev.prox == pytest.approx((x + lam) / (1 + lam), rel=1e-12, abs=1e-12)
    assert ev.d_x == pytest.approx((x - 1) / (1 + lam), rel=1e-12, abs=1e-12)
    assert ev.d_xx == pytest.approx(1 / (1 + lam), rel=1e-12)


def test_custom_loss_requires_only_the_function():
    huber = CustomLoss(
        lambda z: np.where(np.abs(z - 1) <= 1, 0.5 * (z - 1) ** 2, np.abs(z - 1) - 0.5),
        name="huber-margin")
    ev = moreau_envelope(huber, 4.0, 2.0)
    ref = prox_oracle(lambda v: 0.5 * (v - 1) ** 2 if abs(v - 1) <= 1 else abs(v - 1) - 0.5,
                      4.0, 2.0)
    assert ev.prox == pytest.approx(ref, abs=1e-6)
    assert abs(ev.d_lambda + 0.5 * ev.d_x**2) <= 1e-9


def test_custom_loss_convexity_spot_check_rejects():
    with pytest.raises(DomainError):
        CustomLoss(lambda z: -np.asarray(z, dtype=float) ** 2, name="concave")


def test_custom_square_matches_builtin():
    custom = CustomLoss(lambda z: 0.5 * (np.asarray(z, dtype=float) - 1.0) ** 2,
                        name="square-by-hand")
    for x, lam in [(3.0, 1.0), (-2.0, 0.3), (0.5, 10.0)]:
        a = moreau_envelope(custom, x, lam)
        b = moreau_envelope(SQ, x, lam)
        assert a.prox == pytest.approx(b.prox, abs=1e-8)
        assert a.value == pytest.approx(b.value, abs=1e-8)
