"""Finite-sample Monte-Carlo counterpart of the asymptotic theory.

Draws class-conditional Gaussian datasets at finite (n, d), fits weighted
ERM exactly (square loss, normal equations) or by full-batch gradient
descent (any convex loss), and summarizes the fit by the same scalars the
asymptotic solver predicts: alpha = ||theta||, gamma = mu' theta / ||mu||
and the bias.  Population test risks of a fitted linear model are exact
Gaussian tail probabilities, so no held-out sample is ever drawn.

The mean vector is fixed to s e_1 without loss of generality (the noise
is isotropic), which makes gamma a single-coordinate read.  All
randomness flows through a counter-based Philox generator keyed by an
explicit 64-bit seed, so every cell of a sweep is bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from ._validation import check_labels, check_matrix, check_positive_int, check_scalar
from .errors import ConvergenceError, DomainError, NumericError
from .losses import LossModel, SquareLoss
from .risks import ClassRisks, class_risks
from .solver import ProblemSpec

GRAD_TOL_SQUARE = 1e-8        # gradient norm certificate for the exact solver
GD_GRAD_TOL = 1e-6
GD_MAX_ITER = 100_000
GD_NORM_CAP = 1e8
CONDITION_LIMIT = 1e12
_RESAMPLE_CAP = 10_000


@dataclass(frozen=True)
class SampleSet:
    """One drawn dataset: rows X_i = y_i mu + Z_i with Z_i ~ N(0, I)."""

    features: np.ndarray
    labels: np.ndarray
    mu: np.ndarray
    seed: int
    label_resamples: int = 0

    def __post_init__(self):
        X = check_matrix(self.features, "features")
        y = check_labels(self.labels, X.shape[0], "labels")
        if X.shape[0] < 2:
            raise DomainError("need at least two samples")
        if not (np.any(y > 0) and np.any(y < 0)):
            raise DomainError("each class needs at least one sample")
        mu = np.asarray(self.mu, dtype=float)
        if mu.shape != (X.shape[1],):
            raise DomainError(f"mu has shape {mu.shape}, expected ({X.shape[1]},)")

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    @property
    def s(self) -> float:
        return float(np.linalg.norm(self.mu))

    @property
    def realized_delta(self) -> float:
        return self.d / self.n


@dataclass(frozen=True)
class FittedClassifier:
    """A fitted linear model with its theory-facing summary."""

    theta: np.ndarray
    bias: float
    alpha_hat: float
    gamma_hat: float
    objective: float


def generate(spec: ProblemSpec, n: int, seed: int) -> SampleSet:
    """Draw n samples from the spec's mixture with d = round(delta * n).

    Labels are iid with P(+1) = pi_plus; if a draw leaves a class empty the
    labels are redrawn (the features stream is untouched) and the number of
    redraws is recorded on the result.  Deterministic given the seed.
    """
    n = check_positive_int(n, "n", ge=2)
    d = round(spec.delta * n)
    if d < 1:
        raise DomainError(f"d = round(delta * n) = {d}; increase n or delta")
    rng = np.random.Generator(np.random.Philox(np.uint64(seed)))
    resamples = 0
    while True:
        labels = np.where(rng.random(n) < spec.pi_plus, 1.0, -1.0)
        if np.any(labels > 0) and np.any(labels < 0):
            break
        resamples += 1
        if resamples > _RESAMPLE_CAP:
            raise DomainError(
                f"could not draw both classes in {n} samples after "
                f"{_RESAMPLE_CAP} attempts (pi_plus = {spec.pi_plus})")
    mu = np.zeros(d)
    mu[0] = spec.s
    features = rng.standard_normal((n, d))
    features[:, 0] += labels * spec.s
    return SampleSet(features=features, labels=labels, mu=mu, seed=int(seed),
                     label_resamples=resamples)


def _margin_design(data: SampleSet) -> np.ndarray:
    """Rows a_i = y_i (x_i, 1), so margins are A beta with beta = (theta, b)."""
    y = data.labels[:, None]
    return np.concatenate([data.features * y, y], axis=1)


def _weights(data: SampleSet, rho: float, majority_weight: float) -> np.ndarray:
    return np.where(data.labels > 0, rho * majority_weight, majority_weight)


def _condition_estimate(gram: np.ndarray, factor) -> float:
    """Power iteration for the extreme eigenvalues of an SPD gram matrix."""
    rng = np.random.Generator(np.random.Philox(np.uint64(0)))
    v = rng.standard_normal(gram.shape[0])
    v /= np.linalg.norm(v)
    for _ in range(12):
        v = gram @ v
        v /= np.linalg.norm(v)
    lam_max = float(v @ (gram @ v))
    u = rng.standard_normal(gram.shape[0])
    u /= np.linalg.norm(u)
    for _ in range(12):
        u = cho_solve(factor, u)
        u /= np.linalg.norm(u)
    lam_min = 1.0 / float(u @ cho_solve(factor, u))
    return lam_max / max(lam_min, np.finfo(float).tiny)


def _summarize(data: SampleSet, beta: np.ndarray, objective: float) -> FittedClassifier:
    theta = beta[:-1]
    return FittedClassifier(
        theta=theta,
        bias=float(beta[-1]),
        alpha_hat=float(np.linalg.norm(theta)),
        gamma_hat=float(data.mu @ theta / data.s),
        objective=float(objective),
    )


def fit_weighted_square(data: SampleSet, rho: float, *,
                        majority_weight: float = 1.0) -> FittedClassifier:
    """Exact weighted square-loss minimizer via the normal equations.

    Minimizes (1/n) sum_i w_i (y_i (x_i' theta + b) - 1)^2 / 2 over the
    (d+1)-dimensional parameter.  Only the weight ratio matters;
    majority_weight rescales both weights and leaves the fit unchanged.
    """
    rho = check_scalar(rho, "rho", gt=0.0)
    check_scalar(majority_weight, "majority_weight", gt=0.0)
    design = _margin_design(data)
    w = _weights(data, rho, majority_weight)
    gram = design.T @ (design * w[:, None])
    rhs = design.T @ w
    try:
        factor = cho_factor(gram)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            "weighted Gram system is singular; a larger n (n > d + 1) is "
            "needed for a unique minimizer") from exc
    cond = _condition_estimate(gram, factor)
    if cond > CONDITION_LIMIT:
        raise NumericError(
            f"weighted Gram system is ill-conditioned (estimate {cond:.2e} > "
            f"{CONDITION_LIMIT:.0e}); try a larger n")
    beta = cho_solve(factor, rhs)
    margins = design @ beta
    n = data.n
    grad = design.T @ (w * (margins - 1.0)) / n
    grad_norm = float(np.linalg.norm(grad))
    if grad_norm > GRAD_TOL_SQUARE * max(1.0, float(np.linalg.norm(rhs)) / n):
        raise NumericError(
            f"normal-equation solution failed its gradient certificate "
            f"({grad_norm:.3e})")
    objective = float(np.sum(w * 0.5 * (margins - 1.0) ** 2) / n)
    return _summarize(data, beta, objective)


def fit_weighted_general(data: SampleSet, rho: float, loss: LossModel, *,
                         grad_tol: float = GD_GRAD_TOL,
                         max_iter: int = GD_MAX_ITER,
                         norm_cap: float = GD_NORM_CAP) -> FittedClassifier:
    """Full-batch gradient descent with backtracking line search.

    Runs until the gradient norm drops below grad_tol.  On losses without
    a finite minimizer (e.g. logistic on separable data) the parameter
    norm grows without bound; exhausting the budget or crossing norm_cap
    raises ConvergenceError carrying the final gradient norm.
    """
    rho = check_scalar(rho, "rho", gt=0.0)
    design = _margin_design(data)
    w = _weights(data, rho, 1.0) / data.n
    beta = np.zeros(design.shape[1])
    margins = design @ beta
    objective = float(w @ loss.value(margins))
    step = 1.0
    for iteration in range(max_iter):
        grad = design.T @ (w * loss.derivative(margins))
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm < grad_tol:
            return _summarize(data, beta, objective)
        if float(np.linalg.norm(beta)) > norm_cap:
            raise ConvergenceError(
                f"parameter norm exceeded {norm_cap:.0e} (no finite minimizer? "
                f"gradient norm {grad_norm:.3e})",
                residual=grad_norm, iterations=iteration)
        step = min(step * 2.0, 1e12)
        for _ in range(60):
            cand = beta - step * grad
            cand_margins = design @ cand
            cand_obj = float(w @ loss.value(cand_margins))
            if cand_obj <= objective - 1e-4 * step * grad_norm ** 2:
                break
            step *= 0.5
        else:
            raise ConvergenceError(
                f"line search failed at gradient norm {grad_norm:.3e}",
                residual=grad_norm, iterations=iteration)
        beta, margins, objective = cand, cand_margins, cand_obj
    grad_norm = float(np.linalg.norm(design.T @ (w * loss.derivative(margins))))
    raise ConvergenceError(
        f"gradient descent exhausted {max_iter} iterations "
        f"(gradient norm {grad_norm:.3e} > {grad_tol:g})",
        residual=grad_norm, iterations=max_iter)


def evaluate(fit: FittedClassifier, mu: np.ndarray) -> ClassRisks:
    """Exact population risks of a fitted model: no test-set noise."""
    if fit.alpha_hat <= 0.0:
        raise DomainError("degenerate fit: alpha_hat must be > 0")
    s = float(np.linalg.norm(np.asarray(mu, dtype=float)))
    return class_risks(fit.alpha_hat, fit.gamma_hat, fit.bias, s)


def fit_for_loss(data: SampleSet, rho: float, loss: LossModel) -> FittedClassifier:
    """Dispatch to the exact square solver or gradient descent."""
    if isinstance(loss, SquareLoss):
        return fit_weighted_square(data, rho)
    return fit_weighted_general(data, rho, loss)
