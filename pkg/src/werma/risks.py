"""Per-class Gaussian risks and worst-class error of a linear classifier.

For data X | Y=y ~ N(y mu, I) and a classifier sign(x' theta + b), the
class-conditional errors depend only on the scalar summary
(alpha, gamma, b) = (||theta||, mu' theta / ||mu||, b) and s = ||mu||:

    R_plus  = Q(gamma s / alpha + b / alpha)     (the y = +1 class)
    R_minus = Q(gamma s / alpha - b / alpha)

with Q the standard normal tail.  Q is computed from the complementary
error function so the deep tail (values ~1e-15) keeps full relative
accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from ._validation import check_scalar
from .errors import DomainError

_SQRT2 = np.sqrt(2.0)


def qfunc(x):
    """Standard normal tail probability P(Z > x), vectorized."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / _SQRT2)


@dataclass(frozen=True)
class ClassRisks:
    """Class-conditional error probabilities and their maximum."""

    risk_plus: float
    risk_minus: float

    @property
    def wce(self) -> float:
        return max(self.risk_plus, self.risk_minus)


def class_risks(alpha: float, gamma: float, bias: float, s: float) -> ClassRisks:
    """Map a classifier summary (alpha, gamma, bias) to its two risks.

    alpha must be positive; only the direction matters, so the risks are
    invariant under scaling (alpha, gamma, bias) by any c > 0.
    """
    alpha = check_scalar(alpha, "alpha")
    if alpha <= 0.0:
        raise DomainError(f"alpha must be > 0, got {alpha}")
    gamma = check_scalar(gamma, "gamma")
    bias = check_scalar(bias, "bias")
    s = check_scalar(s, "s", gt=0.0)
    base = gamma * s / alpha
    off = bias / alpha
    return ClassRisks(
        risk_plus=float(qfunc(base + off)),
        risk_minus=float(qfunc(base - off)),
    )
