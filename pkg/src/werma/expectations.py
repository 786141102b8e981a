"""Standard-Gaussian expectations of Moreau-envelope derivatives.

The asymptotic system needs scalars of the form

    E[ dM(-alpha G + shift; lam) ],    G ~ N(0, 1),

where dM is one of dM/dx, dM/dlam, d2M/dx2.  Square loss admits exact
moments (the integrand is affine or quadratic in G):

    E[dM/dx]   = (shift - 1) / (1 + lam)
    E[d2M/dx2] = 1 / (1 + lam)
    E[dM/dlam] = -((shift - 1)^2 + alpha^2) / (2 (1 + lam)^2),

using E[(-alpha G + shift - 1)^2] = (shift - 1)^2 + alpha^2.  Every other
loss goes through Gauss-Hermite quadrature in its probabilist form
(weight exp(-t^2/2)), whose spectral accuracy is ample here because the
envelope derivatives are smooth and bounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_hermitenorm

from ._validation import check_scalar
from .errors import ConvergenceError, DomainError
from .losses import LossModel, SquareLoss

QUAD_NODES = 80           # default rule size
QUAD_MAX_NODES = 320      # doubled up to here on disagreement
QUAD_TOL = 1e-8           # node-doubling agreement tolerance

_DERIVS = ("d_x", "d_lambda", "d_xx")


@dataclass(frozen=True)
class ExpectationRequest:
    """One Gaussian expectation of an envelope derivative.

    The integrand argument is -alpha*G + shift with G standard normal;
    ``which`` selects d_x, d_lambda or d_xx; ``lam`` is the envelope scale.
    """

    loss: LossModel
    alpha: float
    shift: float
    lam: float
    which: str

    def __post_init__(self):
        check_scalar(self.alpha, "alpha", ge=0.0)
        check_scalar(self.shift, "shift")
        check_scalar(self.lam, "lambda", gt=0.0)
        if self.which not in _DERIVS:
            raise DomainError(f"which must be one of {_DERIVS}, got {self.which!r}")


@lru_cache(maxsize=None)
def gauss_hermite_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes z and weights w with sum(w) = 1 so E[f(G)] ~ w @ f(z)."""
    z, w = roots_hermitenorm(n)
    return z, w / np.sqrt(2.0 * np.pi)


def _integrand(loss: LossModel, which: str):
    return {
        "d_x": loss.envelope_d_x,
        "d_lambda": loss.envelope_d_lambda,
        "d_xx": loss.envelope_d_xx,
    }[which]


def _quadrature(loss, alpha, shift, lam, which, n):
    z, w = gauss_hermite_rule(n)
    vals = _integrand(loss, which)(-alpha * z + shift, lam)
    return float(w @ vals)


def _square_moment(alpha: float, shift: float, lam: float, which: str) -> float:
    if which == "d_x":
        return (shift - 1.0) / (1.0 + lam)
    if which == "d_xx":
        return 1.0 / (1.0 + lam)
    return -((shift - 1.0) ** 2 + alpha * alpha) / (2.0 * (1.0 + lam) ** 2)


def expect_envelope_derivative(req: ExpectationRequest) -> float:
    """E over G ~ N(0,1) of the requested envelope derivative.

    Square loss bypasses quadrature via its exact moments.  Otherwise the
    Gauss-Hermite rule starts at QUAD_NODES and doubles until two
    successive sizes agree to QUAD_TOL, failing past QUAD_MAX_NODES.
    """
    if isinstance(req.loss, SquareLoss):
        return _square_moment(req.alpha, req.shift, req.lam, req.which)
    n = QUAD_NODES
    prev = _quadrature(req.loss, req.alpha, req.shift, req.lam, req.which, n)
    while n < QUAD_MAX_NODES:
        n *= 2
        cur = _quadrature(req.loss, req.alpha, req.shift, req.lam, req.which, n)
        if abs(cur - prev) <= QUAD_TOL:
            return cur
        prev = cur
    raise ConvergenceError(
        f"quadrature for E[{req.which}] did not stabilize to {QUAD_TOL:g} "
        f"by {QUAD_MAX_NODES} nodes",
        residual=abs(cur - prev),
    )


def envelope_expectations(loss: LossModel, alpha: float, shift: float, lam: float) -> tuple[float, float, float]:
    """(E[d_x], E[d_lambda], E[d_xx]) at one argument, sharing prox work.

    This is the solver's hot path: for numeric losses all three integrands
    are evaluated on one node vector with a single prox solve (plus the
    two shifted solves for the d_xx finite difference).
    """
    if isinstance(loss, SquareLoss):
        return (
            _square_moment(alpha, shift, lam, "d_x"),
            _square_moment(alpha, shift, lam, "d_lambda"),
            _square_moment(alpha, shift, lam, "d_xx"),
        )
    z, w = gauss_hermite_rule(2 * QUAD_NODES)
    x = -alpha * z + shift
    d_x = loss.envelope_d_x(x, lam)
    d_xx = loss.envelope_d_xx(x, lam)
    return float(w @ d_x), float(w @ (-0.5 * d_x * d_x)), float(w @ d_xx)
