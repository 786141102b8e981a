"""Convex margin losses and their Moreau-envelope calculus.

The Moreau envelope of a proper convex loss f with scale lam > 0 is

    M_f(x; lam) = inf_v  f(v) + (v - x)^2 / (2 lam),

a smoothed version of f whose minimizing v is prox_f(x; lam).  Two
identities drive everything downstream (they hold for any proper closed
convex f):

    dM/dx      = (x - prox) / lam,
    dM/dlam    = -(1/2) (dM/dx)^2.

For the square loss l(z) = (z-1)^2 / 2 everything is closed form:

    prox = (x + lam) / (1 + lam),        M = (x-1)^2 / (2 (1+lam)),
    dM/dx = (x-1)/(1+lam),               d2M/dx2 = 1/(1+lam),
    dM/dlam = -(x-1)^2 / (2 (1+lam)^2).

For other losses the prox is found by a safeguarded Newton iteration on
the strictly increasing optimality condition

    psi(v) = l'(v) + (v - x)/lam = 0,

bracketed exactly by [x - lam*max(l'(x), 0), x - lam*min(l'(x), 0)], and
the envelope derivatives follow from the identities above.  The second
x-derivative, which only ever appears inside Gaussian expectations, is a
central finite difference of dM/dx.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from ._validation import check_scalar
from .errors import ConvergenceError, DomainError

PROX_TOL = 1e-10          # on the prox optimality residual psi(v)
PROX_BUDGET = 100
DXX_FD_STEP = 1e-5        # central-difference step for d2M/dx2 (numeric losses)
_CONVEXITY_GRID = np.linspace(-20.0, 20.0, 81)


@dataclass(frozen=True)
class EnvelopeValue:
    """Moreau envelope of a loss at one (x, lam) point, with derivatives.

    Fields: envelope value, the prox point achieving it, dM/dx, dM/dlam
    and d2M/dx2.
    """

    value: float
    prox: float
    d_x: float
    d_lambda: float
    d_xx: float


class LossModel:
    """A convex scalar margin loss.

    Subclasses provide ``value`` (vectorized) and, when available,
    ``derivative`` / ``second_derivative``; closed-form losses override
    the prox-based envelope machinery wholesale.
    """

    name: str = "loss"

    def value(self, z):
        raise NotImplementedError

    def derivative(self, z):
        """l'(z); numeric fallback uses a central difference of value."""
        z = np.asarray(z, dtype=float)
        h = 1e-6 * np.maximum(1.0, np.abs(z))
        return (self.value(z + h) - self.value(z - h)) / (2.0 * h)

    def prox(self, x, lam: float):
        """Minimizer of value(v) + (v-x)^2/(2 lam), elementwise over x.

        Safeguarded Newton on psi(v) = l'(v) + (v-x)/lam with an exact
        initial bracket; falls back to bisection whenever the Newton
        candidate leaves the bracket or jumps more than half its width.
        """
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        gx = np.asarray(self.derivative(x), dtype=float)
        lo = x - lam * np.maximum(gx, 0.0)
        hi = x - lam * np.minimum(gx, 0.0)
        v = 0.5 * (lo + hi)
        curv = getattr(self, "second_derivative", None)
        # with a finite-difference derivative the residual floors out at the
        # difference noise; once the bracket is resolved to machine precision
        # the bisection certificate is as good as the arithmetic allows
        width_tol = 64.0 * np.finfo(float).eps * np.maximum(1.0, np.abs(x))
        resid = None
        for _ in range(PROX_BUDGET):
            g = np.asarray(self.derivative(v), dtype=float) + (v - x) / lam
            resid = float(np.max(np.abs(g)))
            if np.all((np.abs(g) < PROX_TOL) | (hi - lo < width_tol)):
                break
            if curv is not None:
                h = curv(v) + 1.0 / lam
            else:
                h = np.full_like(v, 1.0 / lam)  # convexity: true slope >= 1/lam
            lo = np.where(g > 0, lo, v)
            hi = np.where(g > 0, v, hi)
            step = g / h
            cand = v - step
            bad = (cand < lo) | (cand > hi) | (np.abs(step) > 0.5 * (hi - lo))
            v = np.where(bad, 0.5 * (lo + hi), cand)
        else:
            raise ConvergenceError(
                f"prox for loss '{self.name}' did not reach tolerance "
                f"{PROX_TOL:g} within {PROX_BUDGET} iterations",
                residual=resid,
                iterations=PROX_BUDGET,
            )
        return float(v[0]) if scalar else v

    # --- envelope pieces, vectorized over x (used by the quadrature) ---

    def envelope_d_x(self, x, lam: float):
        return (x - self.prox(x, lam)) / lam

    def envelope_d_lambda(self, x, lam: float):
        d_x = self.envelope_d_x(x, lam)
        return -0.5 * d_x * d_x

    def envelope_d_xx(self, x, lam: float):
        h = DXX_FD_STEP
        return (self.envelope_d_x(x + h, lam) - self.envelope_d_x(x - h, lam)) / (2.0 * h)

    def envelope_value(self, x, lam: float):
        p = self.prox(x, lam)
        return self.value(p) + (p - x) ** 2 / (2.0 * lam)


class SquareLoss(LossModel):
    """l(z) = (z - 1)^2 / 2, with the fully closed-form envelope."""

    name = "square"

    def value(self, z):
        z = np.asarray(z, dtype=float)
        return 0.5 * (z - 1.0) ** 2

    def derivative(self, z):
        return np.asarray(z, dtype=float) - 1.0

    def second_derivative(self, z):
        return np.ones_like(np.asarray(z, dtype=float))

    def prox(self, x, lam: float):
        x = np.asarray(x, dtype=float)
        out = (x + lam) / (1.0 + lam)
        return float(out) if out.ndim == 0 else out

    def envelope_d_x(self, x, lam: float):
        return (np.asarray(x, dtype=float) - 1.0) / (1.0 + lam)

    def envelope_d_xx(self, x, lam: float):
        return np.full_like(np.asarray(x, dtype=float), 1.0 / (1.0 + lam))

    def envelope_value(self, x, lam: float):
        x = np.asarray(x, dtype=float)
        return 0.5 * (x - 1.0) ** 2 / (1.0 + lam)


class LogisticLoss(LossModel):
    """l(z) = log(1 + exp(-z)), smooth and strictly convex."""

    name = "logistic"

    def value(self, z):
        return np.logaddexp(0.0, -np.asarray(z, dtype=float))

    def derivative(self, z):
        return -expit(-np.asarray(z, dtype=float))

    def second_derivative(self, z):
        z = np.asarray(z, dtype=float)
        return expit(z) * expit(-z)


class CustomLoss(LossModel):
    """Wrap a user-supplied convex scalar function.

    Only the function itself is required; the derivative defaults to a
    central finite difference and all envelope quantities derive from the
    numeric prox.  Convexity is spot-checked on a midpoint grid at
    construction time.
    """

    def __init__(self, fn, derivative=None, name: str = "custom"):
        self._fn = fn
        self._derivative = derivative
        self.name = name
        self._check_midpoint_convexity()

    def value(self, z):
        z = np.asarray(z, dtype=float)
        return np.asarray(self._fn(z), dtype=float)

    def derivative(self, z):
        if self._derivative is not None:
            return np.asarray(self._derivative(np.asarray(z, dtype=float)), dtype=float)
        return super().derivative(z)

    def _check_midpoint_convexity(self):
        g = _CONVEXITY_GRID
        a, b = g[:-1], g[1:]
        mid = self.value(0.5 * (a + b))
        chord = 0.5 * (self.value(a) + self.value(b))
        gap = mid - chord
        if np.any(gap > 1e-9 * np.maximum(1.0, np.abs(chord))):
            raise DomainError(
                f"loss '{self.name}' fails midpoint convexity on the check grid "
                f"(max violation {float(np.max(gap)):.3e})"
            )


_BUILTIN = {"square": SquareLoss, "logistic": LogisticLoss}


def loss_by_name(name: str) -> LossModel:
    """Instantiate a built-in loss from its CLI name."""
    try:
        return _BUILTIN[name.lower()]()
    except KeyError:
        raise DomainError(
            f"unknown loss '{name}'; available: {sorted(_BUILTIN)}"
        ) from None


def moreau_envelope(loss: LossModel, x: float, lam: float) -> EnvelopeValue:
    """Evaluate the Moreau envelope of ``loss`` at (x, lam), lam > 0.

    Returns the envelope value, the prox point, and the three derivatives
    used by the asymptotic system.  Closed-form losses use their direct
    expressions; d_lambda is always formed as -(1/2) d_x^2, so that
    identity holds to the last bit.
    """
    x = check_scalar(x, "x")
    lam = check_scalar(lam, "lambda", gt=0.0)
    xv = np.asarray([x], dtype=float)
    p = loss.prox(xv, lam)
    d_x = loss.envelope_d_x(xv, lam)
    return EnvelopeValue(
        value=float(loss.envelope_value(xv, lam)[0]),
        prox=float(p[0]),
        d_x=float(d_x[0]),
        d_lambda=float(-0.5 * d_x[0] * d_x[0]),
        d_xx=float(loss.envelope_d_xx(xv, lam)[0]),
    )
