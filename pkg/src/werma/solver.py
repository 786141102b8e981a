"""Asymptotic characterization of weighted ERM on an imbalanced Gaussian mix.

Setting: X | Y=y ~ N(y mu, I) in dimension d, labels +1 with prior
pi_plus <= 1/2, n samples, proportional regime delta = d/n in (0, 1).
Weighted ERM puts weight rho on minority (+1) samples and 1 on majority
samples and minimizes (1/n) sum_i w_i l(y_i (x_i' theta + b)).

As n, d -> infinity the minimizer's summary (alpha, gamma, b) =
(||theta||, mu' theta/||mu||, b) concentrates on the solution of a
four-variable scalar system in (alpha, gamma, lam, b), obtained from a
CGMT-style scalarization.  With the Gaussian expectations
E+[.] at argument (-alpha G + s gamma + b; lam) and
E-[.] at argument (-alpha G + s gamma - b; lam/rho):

    (a) delta (alpha^2 - gamma^2) + 2 lam^2 pi+ E+[dM/dlam]
                + 2 (lam/rho)^2 pi- E-[dM/dlam]            = 0
    (b) delta gamma rho / lam + pi+ rho s E+[dM/dx]
                + pi- s E-[dM/dx]                           = 0
    (c) -delta alpha rho / lam + pi+ rho alpha E+[d2M/dx2]
                + pi- alpha E-[d2M/dx2]                     = 0
    (d) pi+ rho E+[dM/dx] - pi- E-[dM/dx]                   = 0

For square loss the expectations are exact and the system collapses to
four algebraic equations.  Writing L+ = lam/(1+lam), L- = lam/(rho+lam),
m+ = s gamma + b, m- = s gamma - b:

    (a) pi+ L+^2 ((m+ - 1)^2 + alpha^2)
          + pi- L-^2 ((m- - 1)^2 + alpha^2) = delta (alpha^2 - gamma^2)
    (b) pi+ s (m+ - 1) L+ + pi- s (m- - 1) L- = -delta gamma
    (c) pi+ L+ + pi- L- = delta
    (d) pi+ (m+ - 1)/(1 + lam) - pi- (m- - 1)/(rho + lam) = 0

which this module solves exactly: (c) is a quadratic in lam with a unique
positive root, (d) is then linear in b given gamma, (b) linear in gamma,
and (a) yields alpha^2 explicitly.  Special weights admit fully explicit
solutions: rho = 1 (unweighted) and the error-equalizing weight

    rho_tilde = pi-/pi+ + (pi-/pi+ - 1) delta/(2 pi+ - delta),

defined for delta < 2 pi+, at which b* = 0, gamma* = s/(1+s^2) and the
worst-class error is Q(s^2 sqrt(1-D) / sqrt(D+s^2)) with the effective
overparameterization D = delta/(4 pi+) + delta/(4 pi-).  Downsampling the
majority class maps to the unweighted balanced problem at inflated
D = delta/(2 pi+), which dominates the weighted D, so equal-error
weighting never loses to downsampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ._validation import check_scalar
from .errors import DomainError, InfeasibilityError, NumericError, SolverError
from .expectations import envelope_expectations
from .losses import LossModel, SquareLoss
from .risks import class_risks, qfunc

SQUARE_RESIDUAL_TOL = 1e-11
GENERAL_RESIDUAL_TOL = 1e-9
FP_DAMPING = 0.5
FP_BUDGET = 10_000
FP_CHANGE_TOL = 1e-10
FP_STALL_LIMIT = 50
NEWTON_BUDGET = 50
LAM_DIVERGED = 1e6        # lam escaping past this marks the separable branch


@dataclass(frozen=True)
class ProblemSpec:
    """One scalar problem instance.

    s: signal strength ||mu|| > 0; pi_plus: minority prior in (0, 1/2];
    delta: d/n in (0, 1); rho: minority/majority weight ratio > 0;
    loss: any convex margin loss (square by default).
    """

    s: float
    pi_plus: float
    delta: float
    rho: float = 1.0
    loss: LossModel = field(default_factory=SquareLoss)

    def __post_init__(self):
        check_scalar(self.s, "s", gt=0.0)
        check_scalar(self.pi_plus, "pi_plus", gt=0.0, le=0.5)
        check_scalar(self.delta, "delta", gt=0.0, lt=1.0)
        check_scalar(self.rho, "rho", gt=0.0)
        if not isinstance(self.loss, LossModel):
            raise DomainError(f"loss must be a LossModel, got {self.loss!r}")

    @property
    def pi_minus(self) -> float:
        return 1.0 - self.pi_plus


@dataclass(frozen=True)
class AsymptoticSolution:
    """Solved scalars characterizing the limiting classifier.

    residuals holds the four system residuals at the returned point;
    effective_delta is set by the equal-error and downsampled solvers
    (the D entering the common worst-class-error formula).
    """

    alpha: float
    gamma: float
    lam: float
    bias: float
    residuals: tuple[float, float, float, float]
    effective_delta: float | None = None

    @property
    def residual_norm(self) -> float:
        return float(np.linalg.norm(self.residuals))


@dataclass(frozen=True)
class ComparisonVerdict:
    """Outcome of weighting-vs-not at one (s, pi_plus, delta)."""

    threshold_s_squared: float
    weighted_wins: bool
    wce_weighted: float
    wce_unweighted: float


@dataclass(frozen=True)
class QuasiconvexityReport:
    """Grid diagnostics for worst-class error as a function of rho."""

    rhos: tuple[float, ...]
    risk_plus: tuple[float, ...]
    risk_minus: tuple[float, ...]
    wce: tuple[float, ...]
    monotone_plus: bool
    monotone_minus: bool
    rho_tilde: float | None
    argmin_rho: float
    argmin_within_one_step: bool | None
    crossing_found: bool
    violations: tuple[str, ...]


# ---------------------------------------------------------------------------
# residuals


def square_system_residuals(alpha: float, gamma: float, lam: float, bias: float,
                            spec: ProblemSpec) -> tuple[float, float, float, float]:
    """Residuals of the four algebraic square-loss equations."""
    s, pip, pim, delta, rho = spec.s, spec.pi_plus, spec.pi_minus, spec.delta, spec.rho
    lp = lam / (1.0 + lam)
    lm = lam / (rho + lam)
    mp = s * gamma + bias
    mm = s * gamma - bias
    r1 = (pip * lp * lp * ((mp - 1.0) ** 2 + alpha * alpha)
          + pim * lm * lm * ((mm - 1.0) ** 2 + alpha * alpha)
          - delta * (alpha * alpha - gamma * gamma))
    r2 = pip * s * (mp - 1.0) * lp + pim * s * (mm - 1.0) * lm + delta * gamma
    r3 = pip * lp + pim * lm - delta
    r4 = pip * (mp - 1.0) / (1.0 + lam) - pim * (mm - 1.0) / (rho + lam)
    return (r1, r2, r3, r4)


def _general_terms(x: np.ndarray, spec: ProblemSpec):
    """The six Gaussian expectations of the general system at iterate x."""
    alpha, gamma, lam, bias = x
    loss, s, rho = spec.loss, spec.s, spec.rho
    ep_x, ep_l, ep_xx = envelope_expectations(loss, alpha, s * gamma + bias, lam)
    em_x, em_l, em_xx = envelope_expectations(loss, alpha, s * gamma - bias, lam / rho)
    return ep_x, ep_l, ep_xx, em_x, em_l, em_xx


def general_system_residuals(alpha: float, gamma: float, lam: float, bias: float,
                             spec: ProblemSpec) -> tuple[float, float, float, float]:
    """Residuals of the general four-equation system at one point."""
    x = np.array([alpha, gamma, lam, bias], dtype=float)
    ep_x, ep_l, ep_xx, em_x, em_l, em_xx = _general_terms(x, spec)
    s, pip, pim, delta, rho = spec.s, spec.pi_plus, spec.pi_minus, spec.delta, spec.rho
    r1 = (delta * (alpha * alpha - gamma * gamma)
          + 2.0 * lam * lam * pip * ep_l
          + 2.0 * (lam / rho) ** 2 * pim * em_l)
    r2 = delta * gamma * rho / lam + pip * rho * s * ep_x + pim * s * em_x
    r3 = -delta * alpha * rho / lam + pip * rho * alpha * ep_xx + pim * alpha * em_xx
    r4 = pip * rho * ep_x - pim * em_x
    return (r1, r2, r3, r4)


def _certify(alpha, gamma, lam, bias, spec, tol, effective_delta=None) -> AsymptoticSolution:
    res = square_system_residuals(alpha, gamma, lam, bias, spec)
    sol = AsymptoticSolution(alpha=alpha, gamma=gamma, lam=lam, bias=bias,
                             residuals=res, effective_delta=effective_delta)
    if sol.residual_norm >= tol:
        raise SolverError(
            f"closed-form solution failed its residual certificate "
            f"({sol.residual_norm:.3e} >= {tol:g})",
            iterate=(alpha, gamma, lam, bias), residuals=res)
    return sol


# ---------------------------------------------------------------------------
# closed forms


def solve_unweighted_square(spec: ProblemSpec) -> AsymptoticSolution:
    """Explicit solution at rho = 1, square loss.

    gamma* = s c / (1 + s^2 c) with c = 1 - (pi- - pi+)^2,
    lam* = delta/(1-delta), b* = (pi- - pi+)(gamma* s - 1), and
    alpha* from the energy equation.  Pure arithmetic, no iteration.
    """
    _require_square(spec, "solve_unweighted_square")
    if spec.rho != 1.0:
        raise DomainError(f"solve_unweighted_square requires rho = 1, got {spec.rho}")
    s, pip, pim, delta = spec.s, spec.pi_plus, spec.pi_minus, spec.delta
    gap = pim - pip
    c = 1.0 - gap * gap
    gamma = s * c / (1.0 + s * s * c)
    lam = delta / (1.0 - delta)
    bias = gap * (gamma * s - 1.0)
    alpha = math.sqrt(
        lam * (pip * (gamma * s + bias - 1.0) ** 2 + pim * (gamma * s - bias - 1.0) ** 2)
        + gamma * gamma / (1.0 - delta))
    return _certify(alpha, gamma, lam, bias, spec, SQUARE_RESIDUAL_TOL)


def solve_square(spec: ProblemSpec) -> AsymptoticSolution:
    """Exact solution of the square-loss system at any weight ratio.

    Equation (c) is quadratic in lam,
        (1-delta) lam^2 + (pi+ rho + pi- - delta (1+rho)) lam - delta rho = 0,
    with one positive root; (d) then gives b = c_w (s gamma - 1) with
    c_w = (B - A)/(A + B), A = pi+/(1+lam), B = pi-/(rho+lam); (b) is
    linear in gamma; (a) yields alpha^2 (its denominator
    delta - pi+ L+^2 - pi- L-^2 is positive because L < 1).
    """
    _require_square(spec, "solve_square")
    s, pip, pim, delta, rho = spec.s, spec.pi_plus, spec.pi_minus, spec.delta, spec.rho
    qa = 1.0 - delta
    qb = pip * rho + pim - delta * (1.0 + rho)
    qc = -delta * rho
    disc = math.sqrt(qb * qb - 4.0 * qa * qc)
    # numerically stable positive root
    lam = (2.0 * -qc) / (qb + disc) if qb >= 0 else (disc - qb) / (2.0 * qa)
    a_w = pip / (1.0 + lam)
    b_w = pim / (rho + lam)
    c_w = (b_w - a_w) / (a_w + b_w)
    lp = lam / (1.0 + lam)
    lm = lam / (rho + lam)
    k = pip * lp * (1.0 + c_w) + pim * lm * (1.0 - c_w)
    gamma = s * k / (delta + s * s * k)
    bias = c_w * (s * gamma - 1.0)
    mp = s * gamma + bias
    mm = s * gamma - bias
    num = pip * lp * lp * (mp - 1.0) ** 2 + pim * lm * lm * (mm - 1.0) ** 2 + delta * gamma * gamma
    den = delta - pip * lp * lp - pim * lm * lm
    alpha = math.sqrt(num / den)
    return _certify(alpha, gamma, lam, bias, spec, SQUARE_RESIDUAL_TOL)


def rho_tilde(s: float, pi_plus: float, delta: float) -> float:
    """The error-equalizing weight: prior ratio plus a delta-driven offset.

        rho_tilde = pi-/pi+ + (pi-/pi+ - 1) * delta / (2 pi+ - delta)

    Defined for delta < 2 pi+, independent of s; past that boundary the
    per-class risks never cross and the optimal weight diverges.
    """
    check_scalar(s, "s", gt=0.0)
    pi_plus = check_scalar(pi_plus, "pi_plus", gt=0.0, le=0.5)
    delta = check_scalar(delta, "delta", gt=0.0, lt=1.0)
    if delta >= 2.0 * pi_plus:
        raise InfeasibilityError(
            f"delta = {delta} >= 2 pi_plus = {2.0 * pi_plus}: the per-class "
            "risks never cross and the optimal weight diverges")
    prior_ratio = (1.0 - pi_plus) / pi_plus
    return prior_ratio + (prior_ratio - 1.0) * delta / (2.0 * pi_plus - delta)


def effective_delta_weighted(pi_plus: float, delta: float) -> float:
    """D = delta/(4 pi+) + delta/(4 pi-) for equal-error weighting."""
    return delta / (4.0 * pi_plus) + delta / (4.0 * (1.0 - pi_plus))


def equal_error_wce(s: float, pi_plus: float, delta: float) -> float:
    """Worst-class error at the error-equalizing weight,
    Q(s^2 sqrt(1-D)/sqrt(D+s^2)) with D = delta/(4 pi+) + delta/(4 pi-)."""
    if delta >= 2.0 * pi_plus:
        raise InfeasibilityError(
            f"delta = {delta} >= 2 pi_plus = {2.0 * pi_plus}: equal-error "
            "weighting is undefined in this regime")
    d_eff = effective_delta_weighted(pi_plus, delta)
    assert d_eff < 1.0
    return float(qfunc(s * s * math.sqrt(1.0 - d_eff) / math.sqrt(d_eff + s * s)))


def solve_equal_error_square(spec: ProblemSpec) -> AsymptoticSolution:
    """Closed-form solution at rho = rho_tilde (spec.rho is ignored).

    b* = 0, gamma* = s/(1+s^2), lam* = delta/(2 pi+ - delta), and
    alpha* = sqrt(D/(1-D) (gamma* s - 1)^2 + gamma*^2/(1-D)).  The
    effective_delta field carries D.
    """
    _require_square(spec, "solve_equal_error_square")
    s, pip, delta = spec.s, spec.pi_plus, spec.delta
    rt = rho_tilde(s, pip, delta)   # raises past the feasibility boundary
    d_eff = effective_delta_weighted(pip, delta)
    assert d_eff < 1.0, "D < 1 is implied by delta < 2 pi_plus"
    gamma = s / (1.0 + s * s)
    alpha = math.sqrt(d_eff / (1.0 - d_eff) * (gamma * s - 1.0) ** 2
                      + gamma * gamma / (1.0 - d_eff))
    lam = delta / (2.0 * pip - delta)
    return _certify(alpha, gamma, lam, 0.0, replace(spec, rho=rt),
                    SQUARE_RESIDUAL_TOL, effective_delta=d_eff)


def solve_downsampled(spec: ProblemSpec) -> AsymptoticSolution:
    """Majority class downsampled to minority size, then unweighted ERM.

    Equivalent to the balanced unweighted problem at the inflated ratio
    delta_ds = delta/(2 pi+); requires delta_ds < 1.  The returned bias is
    exactly 0 (balanced transformed problem) and effective_delta carries
    delta_ds.
    """
    _require_square(spec, "solve_downsampled")
    d_ds = spec.delta / (2.0 * spec.pi_plus)
    if d_ds >= 1.0:
        raise InfeasibilityError(
            f"downsampled ratio delta/(2 pi_plus) = {d_ds} >= 1: the reduced "
            "problem leaves the underparameterized regime")
    reduced = ProblemSpec(s=spec.s, pi_plus=0.5, delta=d_ds, rho=1.0, loss=spec.loss)
    sol = solve_unweighted_square(reduced)
    return replace(sol, effective_delta=d_ds)


def _require_square(spec: ProblemSpec, op: str) -> None:
    if not isinstance(spec.loss, SquareLoss):
        raise DomainError(f"{op} requires the square loss, got '{spec.loss.name}'")


# ---------------------------------------------------------------------------
# general solver


def _fp_update(x: np.ndarray, spec: ProblemSpec) -> np.ndarray:
    """One sweep of the per-equation fixed-point map."""
    alpha, gamma, lam, bias = x
    s, pip, pim, delta, rho = spec.s, spec.pi_plus, spec.pi_minus, spec.delta, spec.rho
    ep_x, ep_l, ep_xx, em_x, em_l, em_xx = _general_terms(x, spec)
    curv = pip * rho * ep_xx + pim * em_xx
    lam_new = delta * rho / curv if curv > 0 else LAM_DIVERGED * 2.0
    gamma_new = -lam * s * (pip * rho * ep_x + pim * em_x) / (delta * rho)
    energy = gamma * gamma + (-2.0 * lam * lam * pip * ep_l
                              - 2.0 * (lam / rho) ** 2 * pim * em_l) / delta
    alpha_new = math.sqrt(max(energy, 1e-30))
    bias_new = bias - (pip * rho * ep_x - pim * em_x) / curv if curv > 0 else bias
    return np.array([alpha_new, gamma_new, lam_new, bias_new])


def _project(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    x[0] = max(x[0], 1e-12)
    x[2] = max(x[2], 1e-12)
    x[1] = min(max(x[1], -x[0]), x[0])
    return x


def _resid_vec(x: np.ndarray, spec: ProblemSpec) -> np.ndarray:
    return np.array(general_system_residuals(x[0], x[1], x[2], x[3], spec))


def _check_divergence(x: np.ndarray, spec: ProblemSpec) -> None:
    if not np.all(np.isfinite(x)) or x[2] > LAM_DIVERGED or x[0] > LAM_DIVERGED:
        raise InfeasibilityError(
            f"iterates diverged (lam = {x[2]:.3g}): the '{spec.loss.name}' "
            "loss appears to have no finite minimizer in this regime "
            "(asymptotically separable data)")


def _fixed_point_stage(x: np.ndarray, spec: ProblemSpec, budget: int,
                       change_tol: float) -> np.ndarray:
    """Damped fixed-point iteration; returns the best-residual iterate.

    The map is not contractive for every loss (it diverges outright for
    logistic), so the stage tracks the best point seen and exits early on a
    residual stall, leaving the rest to the Newton stage.
    """
    best = x
    best_norm = float(np.linalg.norm(_resid_vec(x, spec)))
    stall = 0
    for _ in range(budget):
        x_new = _project(x + FP_DAMPING * (_fp_update(x, spec) - x))
        _check_divergence(x_new, spec)
        change = float(np.max(np.abs(x_new - x)))
        x = x_new
        norm = float(np.linalg.norm(_resid_vec(x, spec)))
        if norm < best_norm * (1.0 - 1e-12):
            best, best_norm, stall = x, norm, 0
        else:
            stall += 1
        if change < change_tol or stall > FP_STALL_LIMIT:
            break
    return best


def _newton_stage(x: np.ndarray, spec: ProblemSpec, tol: float) -> np.ndarray:
    """Damped Newton with a forward-difference Jacobian and backtracking."""
    for _ in range(NEWTON_BUDGET):
        r = _resid_vec(x, spec)
        if float(np.max(np.abs(r))) < tol:
            return x
        r_norm = float(np.linalg.norm(r))
        jac = np.empty((4, 4))
        for j in range(4):
            h = 1e-6 * max(1.0, abs(x[j]))
            xp, xm = x.copy(), x.copy()
            xp[j] += h
            xm[j] -= h
            jac[:, j] = (_resid_vec(xp, spec) - _resid_vec(xm, spec)) / (2.0 * h)
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError as exc:
            raise SolverError("singular Jacobian in the Newton stage",
                              iterate=tuple(x), residuals=tuple(r)) from exc
        t, accepted = 1.0, False
        for _ in range(40):
            cand = x + t * step
            if cand[0] > 1e-12 and cand[2] > 1e-12:
                if float(np.linalg.norm(_resid_vec(cand, spec))) < (1.0 - 1e-4 * t) * r_norm:
                    accepted = True
                    break
            t *= 0.5
        if not accepted:
            break
        x = _project(x + t * step)
        _check_divergence(x, spec)
    return x


def solve_general(spec: ProblemSpec, initial=None) -> AsymptoticSolution:
    """Solve the four-equation system for any convex loss.

    Starts from the unweighted square-loss closed form, continues along a
    geometric rho path for rho != 1 (each step warm-started), runs the
    damped fixed-point stage and finishes with Newton polish until every
    residual is below 1e-9.  Iterates escaping to the lam -> infinity
    branch raise InfeasibilityError (no finite minimizer: the loss's
    empirical risk has no finite argmin on asymptotically separable data).
    ``initial`` optionally overrides the starting point (alpha, gamma,
    lam, bias), mainly to probe sensitivity to initialization.
    """
    if initial is None:
        base = solve_unweighted_square(replace(spec, rho=1.0, loss=SquareLoss()))
        x = np.array([base.alpha, base.gamma, base.lam, base.bias])
    else:
        x = _project(np.asarray(initial, dtype=float).copy())
    if spec.rho == 1.0:
        path = [1.0]
    else:
        steps = max(2, int(math.ceil(abs(math.log2(spec.rho)))) + 1)
        path = list(np.geomspace(1.0, spec.rho, steps))
    for rho_k in path:
        stage_spec = replace(spec, rho=float(rho_k))
        last = rho_k == path[-1]
        budget = FP_BUDGET if last else 300
        tol = GENERAL_RESIDUAL_TOL if last else 1e-8
        lam_start = x[2]
        x = _fixed_point_stage(x, stage_spec, budget, FP_CHANGE_TOL if last else 1e-8)
        x = _newton_stage(x, stage_spec, tol)
    res = tuple(float(v) for v in _resid_vec(x, spec))
    if max(abs(v) for v in res) >= GENERAL_RESIDUAL_TOL:
        # signature of the separable phase: the stages chase lam upward
        # without bound while the residual keeps shrinking slowly
        if x[2] > 50.0 * max(1.0, lam_start) or x[2] > 1e3:
            raise InfeasibilityError(
                f"solver is chasing the lam -> infinity branch (lam = {x[2]:.3g}, "
                f"residual {float(np.linalg.norm(res)):.2e}): no finite minimizer "
                "in this regime (asymptotically separable data)")
        raise SolverError(
            f"system residuals did not reach {GENERAL_RESIDUAL_TOL:g} "
            f"(final max residual {max(abs(v) for v in res):.3e})",
            iterate=tuple(x), residuals=res)
    if abs(x[1]) > x[0] * (1.0 + 1e-12):
        raise SolverError("returned iterate violates |gamma| <= alpha",
                          iterate=tuple(x), residuals=res)
    return AsymptoticSolution(alpha=float(x[0]), gamma=float(x[1]), lam=float(x[2]),
                              bias=float(x[3]), residuals=res)


# ---------------------------------------------------------------------------
# comparisons


def separation_threshold(pi_plus: float, delta: float) -> float:
    """Largest s^2 at which equal-error weighting still beats rho = 1.

        s^2 <= (1 - 2 pi+) / (2 (2 pi+ (1-pi+) - sqrt(inner))),
        inner = (1-pi+) pi+ (4 (1-pi+) pi+ - delta) / (1 - delta).

    Returns +inf when the inner square root goes negative or the
    denominator vanishes (then the direct risk comparison decides).
    """
    pip = check_scalar(pi_plus, "pi_plus", gt=0.0, lt=0.5)
    delta = check_scalar(delta, "delta", gt=0.0, lt=1.0)
    inner = (1.0 - pip) * pip * (4.0 * (1.0 - pip) * pip - delta) / (1.0 - delta)
    if inner < 0.0:
        return math.inf
    denom = 2.0 * (2.0 * pip * (1.0 - pip) - math.sqrt(inner))
    if denom <= 0.0:
        return math.inf
    return (1.0 - 2.0 * pip) / denom


def compare_weighted_unweighted(spec: ProblemSpec) -> ComparisonVerdict:
    """Does equal-error weighting beat unweighted ERM on worst-class error?

    Requires delta < 2 pi+ (so the weighted solution exists) and
    pi_plus < 1/2.  The threshold verdict is cross-checked against the
    direct comparison of the two closed-form worst-class errors.
    """
    if spec.pi_plus >= 0.5:
        raise DomainError("compare_weighted_unweighted requires pi_plus < 0.5")
    if spec.delta >= 2.0 * spec.pi_plus:
        raise InfeasibilityError(
            f"delta = {spec.delta} >= 2 pi_plus = {2.0 * spec.pi_plus}: "
            "the weighted equal-error solution does not exist")
    wce_w = equal_error_wce(spec.s, spec.pi_plus, spec.delta)
    unweighted = solve_unweighted_square(replace(spec, rho=1.0, loss=SquareLoss()))
    wce_u = class_risks(unweighted.alpha, unweighted.gamma, unweighted.bias, spec.s).wce
    direct = wce_w <= wce_u
    threshold = separation_threshold(spec.pi_plus, spec.delta)
    if math.isinf(threshold):
        verdict = direct
    else:
        verdict = spec.s * spec.s <= threshold
        if verdict != direct and abs(wce_w - wce_u) > 1e-12:
            raise NumericError(
                f"threshold verdict ({verdict}) contradicts the direct "
                f"worst-class-error comparison ({wce_w} vs {wce_u})")
    return ComparisonVerdict(threshold_s_squared=threshold, weighted_wins=verdict,
                             wce_weighted=wce_w, wce_unweighted=wce_u)


def wce_quasiconvexity_check(spec_grid: list[ProblemSpec]) -> QuasiconvexityReport:
    """Probe monotonicity of the per-class risks and the WCE minimizer in rho.

    All specs must share (s, pi_plus, delta, loss) and have strictly
    increasing rho.  Monotonicity of R+ (non-increasing) and R- (non-
    decreasing) is an observed regularity, not a theorem, so violations
    are reported rather than raised.  When the error-equalizing weight
    exists, the report also says whether the WCE argmin over the grid lies
    within one grid step of it.
    """
    if len(spec_grid) < 2:
        raise DomainError("need at least two grid points")
    first = spec_grid[0]
    rhos = [sp.rho for sp in spec_grid]
    for sp in spec_grid[1:]:
        if (sp.s, sp.pi_plus, sp.delta, type(sp.loss)) != (
                first.s, first.pi_plus, first.delta, type(first.loss)):
            raise DomainError("grid specs must share (s, pi_plus, delta, loss)")
    if not all(b > a for a, b in zip(rhos, rhos[1:])):
        raise DomainError("rho grid must be strictly increasing")

    square = isinstance(first.loss, SquareLoss)
    risks = []
    for sp in spec_grid:
        sol = solve_square(sp) if square else solve_general(sp)
        risks.append(class_risks(sol.alpha, sol.gamma, sol.bias, sp.s))
    rp = [r.risk_plus for r in risks]
    rm = [r.risk_minus for r in risks]
    wce = [r.wce for r in risks]

    slack = 1e-9
    violations = []
    monotone_plus = all(b <= a + slack for a, b in zip(rp, rp[1:]))
    monotone_minus = all(b >= a - slack for a, b in zip(rm, rm[1:]))
    if not monotone_plus:
        violations.append("risk_plus is not non-increasing in rho on the grid")
    if not monotone_minus:
        violations.append("risk_minus is not non-decreasing in rho on the grid")

    crossing_found = any((a - b) * (c - d) <= 0.0
                         for a, b, c, d in zip(rp, rm, rp[1:], rm[1:]))
    argmin_idx = int(np.argmin(wce))
    argmin_rho = rhos[argmin_idx]

    try:
        rt = rho_tilde(first.s, first.pi_plus, first.delta)
    except InfeasibilityError:
        rt = None
    within = None
    if rt is not None:
        lo = rhos[max(argmin_idx - 1, 0)]
        hi = rhos[min(argmin_idx + 1, len(rhos) - 1)]
        within = (lo <= rt <= hi) or math.isclose(argmin_rho, rt, rel_tol=1e-9)
        if not within:
            violations.append(
                f"WCE argmin {argmin_rho} is more than one grid step from "
                f"rho_tilde = {rt}")
    return QuasiconvexityReport(
        rhos=tuple(rhos), risk_plus=tuple(rp), risk_minus=tuple(rm), wce=tuple(wce),
        monotone_plus=monotone_plus, monotone_minus=monotone_minus,
        rho_tilde=rt, argmin_rho=argmin_rho, argmin_within_one_step=within,
        crossing_found=crossing_found, violations=tuple(violations))
