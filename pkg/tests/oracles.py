"""Independent reference implementations used only by tests.

Nothing here may call into the package's own numerical paths: the prox
oracle is a derivative-free golden-section search on the envelope
objective, the expectation oracles are adaptive quadrature of the explicit
density and plain Monte-Carlo with a pure-bisection prox, and the tail
oracle is mpmath at 50 digits.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy.integrate import quad

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def prox_oracle(loss_fn, x: float, lam: float, tol: float = 1e-12) -> float:
    """Golden-section minimizer of loss_fn(v) + (v-x)^2/(2 lam)."""

    def objective(v):
        return loss_fn(v) + (v - x) ** 2 / (2.0 * lam)

    # Generous bracket: the minimizer satisfies |v - x| <= lam |l'(v)|, and
    # expanding until the endpoints' objectives exceed the midpoint's makes
    # the bracket certain without derivatives.
    half = max(1.0, lam)
    lo, hi = x - half, x + half
    for _ in range(200):
        if objective(lo) > objective(x) < objective(hi):
            break
        half *= 2.0
        lo, hi = x - half, x + half
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = objective(d)
    return 0.5 * (a + b)


def logistic_loss(v):
    return np.logaddexp(0.0, -np.asarray(v, dtype=float))


def logistic_prox_bisect(x: np.ndarray, lam: float, iters: int = 80) -> np.ndarray:
    """Pure-bisection prox for the logistic loss, vectorized.

    psi(v) = -sigma(-v) + (v - x)/lam is increasing with a root inside
    [x, x + lam] because sigma(-v) lies in (0, 1).
    """
    x = np.asarray(x, dtype=float)
    lo = x.copy()
    hi = x + lam
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        with np.errstate(over="ignore"):
            psi = -1.0 / (1.0 + np.exp(mid)) + (mid - x) / lam
        lo = np.where(psi < 0, mid, lo)
        hi = np.where(psi < 0, hi, mid)
    return 0.5 * (lo + hi)


def gaussian_expectation_quad(fn, alpha: float, shift: float) -> float:
    """E[fn(-alpha G + shift)] by adaptive quadrature of the density."""

    def integrand(g):
        return fn(-alpha * g + shift) * math.exp(-0.5 * g * g) / math.sqrt(2.0 * math.pi)

    val, _ = quad(integrand, -12.0, 12.0, limit=300, epsabs=1e-12, epsrel=1e-12)
    return val


def logistic_dx_monte_carlo(alpha: float, shift: float, lam: float,
                            n: int = 1_000_000, seed: int = 2024):
    """(estimate, standard error) of E[dM/dx] for the logistic loss."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal(n)
    x = -alpha * g + shift
    vals = (x - logistic_prox_bisect(x, lam)) / lam
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n))


def q_oracle(x: float) -> float:
    """Standard normal tail at 50 significant digits."""
    with mpmath.workdps(50):
        return float(0.5 * mpmath.erfc(x / mpmath.sqrt(2)))


def central_diff(fn, t: float, h: float) -> float:
    return (fn(t + h) - fn(t - h)) / (2.0 * h)
