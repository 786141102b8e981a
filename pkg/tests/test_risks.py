import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from werma import DomainError, class_risks, qfunc

from oracles import q_oracle


def test_qfunc_deep_tail_accuracy():
    # relative error < 1e-12 across [-8, 8] against mpmath at 50 digits
    for x in np.linspace(-8.0, 8.0, 161):
        ref = q_oracle(float(x))
        assert abs(float(qfunc(x)) - ref) <= 1e-12 * abs(ref)


def test_zero_direction_gives_coin_flip():
    r = class_risks(1.0, 0.0, 0.0, 2.0)
    assert r.risk_plus == 0.5
    assert r.risk_minus == 0.5
    assert r.wce == 0.5


def test_balanced_solution_has_equal_risks():
    r = class_risks(0.5, 0.4, 0.0, 2.0)
    assert r.risk_plus == r.risk_minus == pytest.approx(float(qfunc(0.4 * 2.0 / 0.5)))


def test_equal_error_headline_value():
    # gamma s / alpha = 1.5972 corresponds to the equal-error worst-class
    # error near 0.0551
    r = class_risks(1.0, 1.5972 / 2.0, 0.0, 2.0)
    assert r.wce == pytest.approx(0.0551, abs=5e-4)


def test_alpha_must_be_positive():
    with pytest.raises(DomainError):
        class_risks(0.0, 0.1, 0.0, 2.0)
    with pytest.raises(DomainError):
        class_risks(-1.0, 0.1, 0.0, 2.0)


@given(alpha=st.floats(1e-3, 1e3), gamma=st.floats(-5, 5), b=st.floats(-5, 5),
       s=st.floats(1e-2, 10))
@settings(max_examples=200, deadline=None)
def test_bias_flip_swaps_risks_exactly(alpha, gamma, b, s):
    r1 = class_risks(alpha, gamma, b, s)
    r2 = class_risks(alpha, gamma, -b, s)
    assert r1.risk_plus == r2.risk_minus
    assert r1.risk_minus == r2.risk_plus


@given(alpha=st.floats(1e-2, 1e2), gamma=st.floats(-3, 3), b=st.floats(-3, 3),
       s=st.floats(0.1, 6), c=st.floats(1e-3, 1e3))
@settings(max_examples=200, deadline=None)
def test_scale_invariance(alpha, gamma, b, s, c):
    r1 = class_risks(alpha, gamma, b, s)
    r2 = class_risks(c * alpha, c * gamma, c * b, s)
    assert r2.risk_plus == pytest.approx(r1.risk_plus, rel=1e-9, abs=1e-12)
    assert r2.risk_minus == pytest.approx(r1.risk_minus, rel=1e-9, abs=1e-12)


def test_risks_monotone_in_bias():
    bs = np.linspace(-2.0, 2.0, 41)
    plus = [class_risks(1.0, 0.3, float(b), 2.0).risk_plus for b in bs]
    minus = [class_risks(1.0, 0.3, float(b), 2.0).risk_minus for b in bs]
    assert all(b2 < b1 for b1, b2 in zip(plus, plus[1:]))
    assert all(b2 > b1 for b1, b2 in zip(minus, minus[1:]))


def test_risks_lie_in_unit_interval_and_wce_is_max():
    rng = np.random.default_rng(12)
    for _ in range(300):
        r = class_risks(float(rng.uniform(0.01, 5)), float(rng.normal()),
                        float(rng.normal()), float(rng.uniform(0.1, 5)))
        assert 0.0 <= r.risk_plus <= 1.0
        assert 0.0 <= r.risk_minus <= 1.0
        assert r.wce == max(r.risk_plus, r.risk_minus)
