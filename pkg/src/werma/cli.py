"""Command-line front end: solves, sweeps, comparisons and simulations.

Every table-producing subcommand emits self-describing output: the full
configuration is echoed as '#'-prefixed metadata lines (or a metadata
object in JSON mode), and each row repeats the inputs it was computed
from, so any row can be re-solved independently.  Output is byte-stable
across reruns of the same command.

Exit codes: 0 success (including flagged infeasible rows), 2
configuration error, 3 numeric or solver failure.
"""

from __future__ import annotations

import functools
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import click
import numpy as np

from . import __version__
from .errors import DomainError, InfeasibilityError, NumericError, WermaError
from .losses import SquareLoss, loss_by_name
from .risks import class_risks
from .simulation import evaluate, fit_for_loss, generate
from .solver import (
    ProblemSpec,
    compare_weighted_unweighted,
    rho_tilde,
    solve_downsampled,
    solve_equal_error_square,
    solve_general,
    solve_square,
)
from .spectrum import effective_dim, load_feature_table

_HEADLINE = {"s": 2.0, "pi_plus": 0.2, "delta": 0.2}   # a bare invocation
                                                       # reproduces the
                                                       # canonical regime


# ---------------------------------------------------------------------------
# formatting


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_output(rows, columns, meta, out, fmt) -> None:
    if fmt == "json":
        payload = {"metadata": meta, "rows": [
            {k: row.get(k) for k in columns} for row in rows]}
        text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=True) + "\n"
    else:
        lines = [f"# tool: werma {__version__}"]
        for key in sorted(meta):
            if key == "config":
                lines.append("# config: " + json.dumps(meta["config"], sort_keys=True))
            else:
                lines.append(f"# {key}: {_fmt_cell(meta[key])}")
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt_cell(row.get(c)) for c in columns))
        text = "\n".join(lines) + "\n"
    if out in (None, "-"):
        click.echo(text, nl=False)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DomainError as exc:
            click.echo(f"configuration error: {exc}", err=True)
            sys.exit(2)
        except (InfeasibilityError, NumericError) as exc:
            click.echo(f"solver failure: {exc}", err=True)
            sys.exit(3)
        except WermaError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)
    return wrapper


# ---------------------------------------------------------------------------
# option parsing


def parse_grid(text: str) -> list[float]:
    """start:stop:points with an optional trailing :log for geometric."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise DomainError(f"grid must be start:stop:points[:log], got {text!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        points = int(parts[2])
    except ValueError:
        raise DomainError(f"could not parse grid {text!r}") from None
    if points < 1:
        raise DomainError("grid needs at least one point")
    scale = parts[3].lower() if len(parts) == 4 else "linear"
    if scale not in ("linear", "log"):
        raise DomainError(f"grid scale must be 'linear' or 'log', got {scale!r}")
    if points == 1:
        return [start]
    if scale == "log":
        if start <= 0 or stop <= 0:
            raise DomainError("log grid endpoints must be positive")
        return [float(v) for v in np.geomspace(start, stop, points)]
    return [float(v) for v in np.linspace(start, stop, points)]


def parse_seeds(text: str) -> list[int]:
    """Either 'a..b' (inclusive) or a comma list of integers."""
    try:
        if ".." in text:
            lo_text, hi_text = text.split("..", 1)
            lo, hi = int(lo_text), int(hi_text)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise DomainError(
            f"seeds must be 'a..b' or a comma list of integers, got {text!r}"
        ) from None


def _problem_options(fn):
    for opt in reversed([
        click.option("--s", type=float, default=_HEADLINE["s"], show_default=True,
                     help="signal strength ||mu||"),
        click.option("--pi-plus", type=float, default=_HEADLINE["pi_plus"],
                     show_default=True, help="minority prior in (0, 0.5]"),
        click.option("--delta", type=float, default=_HEADLINE["delta"],
                     show_default=True, help="overparameterization ratio d/n"),
        click.option("--rho", type=float, default=1.0, show_default=True,
                     help="minority/majority weight ratio"),
        click.option("--loss", type=click.Choice(["square", "logistic"]),
                     default="square", show_default=True),
    ]):
        fn = opt(fn)
    return fn


def _output_options(fn):
    for opt in reversed([
        click.option("--out", default="-", show_default=True,
                     help="output path, or - for stdout"),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                     default="csv", show_default=True),
    ]):
        fn = opt(fn)
    return fn


def _spec(s, pi_plus, delta, rho, loss) -> ProblemSpec:
    return ProblemSpec(s=s, pi_plus=pi_plus, delta=delta, rho=rho,
                       loss=loss_by_name(loss))


def _solve(spec: ProblemSpec):
    if isinstance(spec.loss, SquareLoss):
        return solve_square(spec)
    return solve_general(spec)


def _theory_row(spec: ProblemSpec, *, marker: str = "") -> dict:
    base = {
        "s": spec.s, "pi_plus": spec.pi_plus, "delta": spec.delta,
        "rho": spec.rho, "loss": spec.loss.name, "marker": marker,
    }
    try:
        sol = _solve(spec)
    except (InfeasibilityError, NumericError) as exc:
        base.update({"feasible": False, "note": str(exc)})
        return base
    risks = class_risks(sol.alpha, sol.gamma, sol.bias, spec.s)
    base.update({
        "alpha": sol.alpha, "gamma": sol.gamma, "bias": sol.bias,
        "lambda": sol.lam, "risk_plus": risks.risk_plus,
        "risk_minus": risks.risk_minus, "wce": risks.wce,
        "feasible": True, "residual_norm": sol.residual_norm, "note": "",
    })
    return base


_SWEEP_COLUMNS = ["mode", "vary", "s", "pi_plus", "delta", "rho", "loss",
                  "alpha", "gamma", "bias", "lambda", "risk_plus", "risk_minus",
                  "wce", "feasible", "residual_norm", "marker", "note"]
_SIM_EXTRA = ["sim_n", "sim_seeds", "sim_alpha_mean", "sim_gamma_mean",
              "sim_bias_mean", "sim_risk_plus_mean", "sim_risk_plus_std",
              "sim_risk_minus_mean", "sim_risk_minus_std"]


def _grid_spec(base: ProblemSpec, vary: str, value: float) -> ProblemSpec:
    if vary == "delta":
        return ProblemSpec(base.s, base.pi_plus, value, base.rho, base.loss)
    if vary == "rho":
        return ProblemSpec(base.s, base.pi_plus, base.delta, value, base.loss)
    if vary == "pi":
        return ProblemSpec(base.s, value, base.delta, base.rho, base.loss)
    raise DomainError(f"unknown sweep parameter {vary!r}")


def _simulate_cell(args):
    spec, n, seed = args
    data = generate(spec, n, seed)
    fit = fit_for_loss(data, spec.rho, spec.loss)
    risks = evaluate(fit, data.mu)
    return {
        "seed": seed, "n": data.n, "d": data.d,
        "realized_delta": data.realized_delta,
        "alpha": fit.alpha_hat, "gamma": fit.gamma_hat, "bias": fit.bias,
        "risk_plus": risks.risk_plus, "risk_minus": risks.risk_minus,
        "wce": risks.wce,
    }


def _map(fn, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _attach_overlay(row, spec, n, seeds, workers):
    cells = _map(_simulate_cell, [(spec, n, seed) for seed in seeds], workers)
    arr = {k: np.array([c[k] for c in cells]) for k in
           ("alpha", "gamma", "bias", "risk_plus", "risk_minus")}
    row.update({
        "sim_n": n, "sim_seeds": len(seeds),
        "sim_alpha_mean": float(arr["alpha"].mean()),
        "sim_gamma_mean": float(arr["gamma"].mean()),
        "sim_bias_mean": float(arr["bias"].mean()),
        "sim_risk_plus_mean": float(arr["risk_plus"].mean()),
        "sim_risk_plus_std": float(arr["risk_plus"].std(ddof=0)),
        "sim_risk_minus_mean": float(arr["risk_minus"].mean()),
        "sim_risk_minus_std": float(arr["risk_minus"].std(ddof=0)),
    })


# ---------------------------------------------------------------------------
# commands


@click.group()
@click.version_option(__version__, prog_name="werma")
def main():
    """Asymptotic characterization and optimal class weights for weighted
    ERM on imbalanced Gaussian data, plus a finite-sample validator."""


@main.command()
@_problem_options
@_output_options
@_guarded
def solve(s, pi_plus, delta, rho, loss, out, fmt):
    """Solve the asymptotic system at one parameter point."""
    spec = _spec(s, pi_plus, delta, rho, loss)
    sol = _solve(spec)
    risks = class_risks(sol.alpha, sol.gamma, sol.bias, spec.s)
    row = {"mode": "solve", "vary": "", "s": spec.s, "pi_plus": spec.pi_plus,
           "delta": spec.delta, "rho": spec.rho, "loss": spec.loss.name,
           "alpha": sol.alpha, "gamma": sol.gamma, "bias": sol.bias,
           "lambda": sol.lam, "risk_plus": risks.risk_plus,
           "risk_minus": risks.risk_minus, "wce": risks.wce, "feasible": True,
           "residual_norm": sol.residual_norm, "marker": "", "note": ""}
    meta = {"mode": "solve", "config": {"s": s, "pi_plus": pi_plus, "delta": delta,
                                        "rho": rho, "loss": loss}}
    _write_output([row], _SWEEP_COLUMNS, meta, out, fmt)


@main.command("rho-tilde")
@click.option("--s", type=float, default=_HEADLINE["s"], show_default=True,
              help="accepted for symmetry; the weight is independent of s")
@click.option("--pi-plus", type=float, default=_HEADLINE["pi_plus"], show_default=True)
@click.option("--delta", type=float, default=_HEADLINE["delta"], show_default=True)
@_output_options
@_guarded
def rho_tilde_cmd(s, pi_plus, delta, out, fmt):
    """Error-equalizing weight ratio (prior ratio plus delta-driven offset)."""
    pi_plus = float(pi_plus)
    prior_ratio = (1.0 - pi_plus) / pi_plus
    row = {"mode": "rho_tilde", "s": s, "pi_plus": pi_plus, "delta": delta,
           "prior_ratio": prior_ratio}
    try:
        value = rho_tilde(s, pi_plus, delta)
        row.update({"rho_tilde": value, "feasible": True, "note": ""})
    except InfeasibilityError as exc:
        row.update({"rho_tilde": None, "feasible": False, "note": str(exc)})
    columns = ["mode", "s", "pi_plus", "delta", "prior_ratio", "rho_tilde",
               "feasible", "note"]
    meta = {"mode": "rho_tilde",
            "config": {"s": s, "pi_plus": pi_plus, "delta": delta}}
    _write_output([row], columns, meta, out, fmt)


@main.command()
@click.option("--vary", type=click.Choice(["delta", "rho", "pi"]), required=True)
@click.option("--grid", "grid_text", required=True,
              help="start:stop:points[:log]")
@click.option("--n", type=int, default=None,
              help="sample size for a simulated overlay")
@click.option("--seeds", "seeds_text", default=None,
              help="overlay seeds: 'a..b' or comma list")
@click.option("--workers", type=int, default=1, show_default=True)
@_problem_options
@_output_options
@_guarded
def sweep(vary, grid_text, n, seeds_text, workers, s, pi_plus, delta, rho, loss,
          out, fmt):
    """Sweep one parameter; emit theory rows (optionally with sim overlay)."""
    base = _spec(s, pi_plus, delta, rho, loss)
    grid = parse_grid(grid_text)
    lo, hi = min(grid), max(grid)
    if vary == "delta" and (lo <= 0.0 or hi >= 1.0):
        raise DomainError("delta grid must stay inside (0, 1)")
    if vary == "pi" and (lo <= 0.0 or hi > 0.5):
        raise DomainError("pi grid must stay inside (0, 0.5]")
    if vary == "rho" and lo <= 0.0:
        raise DomainError("rho grid must be positive")
    seeds = parse_seeds(seeds_text) if seeds_text else None
    if (n is None) != (seeds is None):
        raise DomainError("--n and --seeds must be given together")

    points: list[tuple[float, str]] = [(v, "") for v in grid]
    meta = {"mode": "sweep", "vary": vary,
            "config": {"vary": vary, "grid": grid_text, "s": s,
                       "pi_plus": pi_plus, "delta": delta, "rho": rho,
                       "loss": loss, "n": n, "seeds": seeds_text}}
    if vary == "rho":
        prior_ratio = base.pi_minus / base.pi_plus
        meta["prior_ratio"] = prior_ratio
        points.append((prior_ratio, "prior_ratio"))
        try:
            rt = rho_tilde(base.s, base.pi_plus, base.delta)
            meta["rho_tilde"] = rt
            points.append((rt, "rho_tilde"))
        except InfeasibilityError as exc:
            meta["rho_tilde"] = "infeasible"
            meta["rho_tilde_note"] = str(exc)
        points.sort(key=lambda pair: pair[0])

    rows = []
    for value, marker in points:
        spec = _grid_spec(base, vary, value)
        row = _theory_row(spec, marker=marker)
        row["mode"] = "sweep"
        row["vary"] = vary
        if seeds is not None and row.get("feasible"):
            _attach_overlay(row, spec, n, seeds, workers)
        rows.append(row)
    columns = _SWEEP_COLUMNS + (_SIM_EXTRA if seeds is not None else [])
    _write_output(rows, columns, meta, out, fmt)


@main.command("ds-compare")
@click.option("--grid", "grid_text", required=True,
              help="delta grid start:stop:points[:log], inside (0, 2 pi+)")
@click.option("--s", type=float, default=_HEADLINE["s"], show_default=True)
@click.option("--pi-plus", type=float, default=_HEADLINE["pi_plus"], show_default=True)
@_output_options
@_guarded
def ds_compare(grid_text, s, pi_plus, out, fmt):
    """Equal-error weighting vs downsampling across delta (paired rows)."""
    grid = parse_grid(grid_text)
    if min(grid) <= 0.0 or max(grid) >= 2.0 * pi_plus:
        raise DomainError(
            f"delta grid must stay inside (0, 2 pi_plus) = (0, {2.0 * pi_plus})")
    rows = []
    for delta in grid:
        spec = ProblemSpec(s=s, pi_plus=pi_plus, delta=delta)
        rt = rho_tilde(s, pi_plus, delta)
        for method, sol, rho_used in (
                ("werm", solve_equal_error_square(spec), rt),
                ("downsampled", solve_downsampled(spec), 1.0)):
            risks = class_risks(sol.alpha, sol.gamma, sol.bias, s)
            rows.append({
                "mode": "ds_compare", "method": method, "s": s,
                "pi_plus": pi_plus, "delta": delta, "rho_used": rho_used,
                "effective_delta": sol.effective_delta, "alpha": sol.alpha,
                "gamma": sol.gamma, "bias": sol.bias, "lambda": sol.lam,
                "risk_plus": risks.risk_plus, "risk_minus": risks.risk_minus,
                "wce": risks.wce, "feasible": True,
                "residual_norm": sol.residual_norm,
            })
    columns = ["mode", "method", "s", "pi_plus", "delta", "rho_used",
               "effective_delta", "alpha", "gamma", "bias", "lambda",
               "risk_plus", "risk_minus", "wce", "feasible", "residual_norm"]
    meta = {"mode": "ds_compare",
            "config": {"grid": grid_text, "s": s, "pi_plus": pi_plus}}
    _write_output(rows, columns, meta, out, fmt)


@main.command()
@click.option("--vary", type=click.Choice(["delta", "rho", "pi"]), default="rho",
              show_default=True)
@click.option("--grid", "grid_text", default=None,
              help="optional grid; defaults to the single configured point")
@click.option("--n", type=int, required=True)
@click.option("--seeds", "seeds_text", required=True)
@click.option("--workers", type=int, default=1, show_default=True)
@_problem_options
@_output_options
@_guarded
def simulate(vary, grid_text, n, seeds_text, workers, s, pi_plus, delta, rho,
             loss, out, fmt):
    """Generate-fit-evaluate per (grid point, seed), plus aggregates."""
    base = _spec(s, pi_plus, delta, rho, loss)
    seeds = parse_seeds(seeds_text)
    if not seeds:
        raise DomainError("need at least one seed")
    grid = parse_grid(grid_text) if grid_text else [getattr(
        base, {"delta": "delta", "rho": "rho", "pi": "pi_plus"}[vary])]
    columns = ["mode", "vary", "kind", "s", "pi_plus", "delta", "rho", "loss",
               "n", "d", "seed", "realized_delta", "alpha", "gamma", "bias",
               "lambda", "risk_plus", "risk_minus", "wce", "feasible", "note"]
    rows = []
    agg_keys = ("alpha", "gamma", "bias", "risk_plus", "risk_minus", "wce")
    for value in grid:
        spec = _grid_spec(base, vary, value)
        inputs = {"mode": "simulate", "vary": vary, "s": spec.s,
                  "pi_plus": spec.pi_plus, "delta": spec.delta,
                  "rho": spec.rho, "loss": spec.loss.name, "n": n}
        cells = []
        for seed in seeds:
            try:
                cell = _simulate_cell((spec, n, seed))
            except WermaError as exc:
                rows.append({**inputs, "kind": "seed", "seed": seed,
                             "feasible": False, "note": str(exc)})
                continue
            cells.append(cell)
            rows.append({**inputs, **cell, "kind": "seed", "feasible": True,
                         "note": ""})
        if cells:
            for kind, reducer in (("mean", np.mean), ("std", np.std)):
                stats = {k: float(reducer([c[k] for c in cells])) for k in agg_keys}
                rows.append({**inputs, "kind": kind, "d": cells[0]["d"],
                             "realized_delta": cells[0]["realized_delta"],
                             "feasible": True, "note": "", **stats})
        theory = _theory_row(spec)
        theory.update(inputs)
        theory["kind"] = "theory"
        rows.append(theory)
    meta = {"mode": "simulate",
            "config": {"vary": vary, "grid": grid_text, "s": s,
                       "pi_plus": pi_plus, "delta": delta, "rho": rho,
                       "loss": loss, "n": n, "seeds": seeds_text}}
    _write_output(rows, columns, meta, out, fmt)


@main.command("compare-sep")
@click.option("--grid", "grid_text", default="0.5:6:40", show_default=True,
              help="signal-strength grid start:stop:points[:log]")
@click.option("--pi-plus", type=float, default=_HEADLINE["pi_plus"], show_default=True)
@click.option("--delta", type=float, default=_HEADLINE["delta"], show_default=True)
@_output_options
@_guarded
def compare_sep(grid_text, pi_plus, delta, out, fmt):
    """Weighted-vs-unweighted verdict across signal strengths."""
    if delta >= 2.0 * pi_plus:
        raise DomainError(
            f"requires delta < 2 pi_plus = {2.0 * pi_plus} so the weighted "
            "solution exists")
    if pi_plus >= 0.5:
        raise DomainError("requires pi_plus < 0.5")
    grid = parse_grid(grid_text)
    rows = []
    threshold = None
    for s in grid:
        verdict = compare_weighted_unweighted(ProblemSpec(s=s, pi_plus=pi_plus,
                                                          delta=delta))
        threshold = verdict.threshold_s_squared
        rows.append({
            "mode": "compare_sep", "s": s, "pi_plus": pi_plus, "delta": delta,
            "threshold_s_squared": verdict.threshold_s_squared,
            "weighted_wins": verdict.weighted_wins,
            "wce_weighted": verdict.wce_weighted,
            "wce_unweighted": verdict.wce_unweighted,
        })
    meta = {"mode": "compare_sep",
            "config": {"grid": grid_text, "pi_plus": pi_plus, "delta": delta}}
    if threshold is not None and math.isfinite(threshold):
        meta["s_star"] = math.sqrt(threshold)
    columns = ["mode", "s", "pi_plus", "delta", "threshold_s_squared",
               "weighted_wins", "wce_weighted", "wce_unweighted"]
    _write_output(rows, columns, meta, out, fmt)


@main.command("effdim")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--threshold", type=float, default=0.99, show_default=True)
@click.option("--labels-col", default=None,
              help="name of a label column to drop before PCA")
@click.option("--delimiter", default=None,
              help="field delimiter (sniffed from the header by default)")
@click.option("--out", default="-", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", show_default=True)
@_guarded
def effdim_cmd(input_path, threshold, labels_col, delimiter, out, fmt):
    """Effective latent dimension of a feature table by explained variance."""
    X, columns = load_feature_table(input_path, labels_col=labels_col,
                                    delimiter=delimiter)
    report = effective_dim(X, threshold)
    if fmt == "json":
        payload = {
            "input": str(input_path), "threshold": report.threshold,
            "n_samples": report.n_samples, "n_features": report.n_features,
            "columns": columns, "effective_dim": report.effective_dim,
            "eigenvalues": list(report.eigenvalues),
            "cumulative_variance_fraction":
                list(report.cumulative_variance_fraction),
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        show = min(len(report.eigenvalues), max(report.effective_dim + 3, 10))
        lines = [
            f"input:          {input_path}",
            f"samples x features: {report.n_samples} x {report.n_features}",
            f"threshold:      {report.threshold}",
            f"effective_dim:  {report.effective_dim}",
            "",
            "  k  eigenvalue      cumulative",
        ]
        for i in range(show):
            tag = "  <-- threshold" if i + 1 == report.effective_dim else ""
            lines.append(f"{i + 1:>3}  {report.eigenvalues[i]:<14.6g}"
                         f"  {report.cumulative_variance_fraction[i]:.6f}{tag}")
        if show < len(report.eigenvalues):
            lines.append(f"  ... ({len(report.eigenvalues) - show} more)")
        text = "\n".join(lines) + "\n"
    if out in (None, "-"):
        click.echo(text, nl=False)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def effdim_standalone():
    """Console-script entry exposing the effdim subcommand directly."""
    effdim_cmd(prog_name="effdim")  # noqa: E1120  (click injects parameters)


if __name__ == "__main__":
    main()
