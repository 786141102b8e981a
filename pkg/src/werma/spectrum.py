"""Effective latent dimension of a feature matrix by explained variance.

Real backbones leave most latent directions unused; the dimension that
matters for choosing a class weight is the number of leading principal
components capturing a set fraction (0.99 by default) of the variance.
That count is what should play the role of d in delta = d/n when the
theory is applied to real features.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from ._validation import check_matrix, check_scalar
from .errors import DegenerateDataError, DomainError

DEFAULT_THRESHOLD = 0.99
_EIG_CLIP = 0.0   # tiny negative eigenvalues from roundoff are clipped here


@dataclass(frozen=True)
class SpectrumReport:
    """Covariance spectrum summary of one feature matrix."""

    eigenvalues: tuple[float, ...]
    cumulative_variance_fraction: tuple[float, ...]
    effective_dim: int
    threshold: float
    n_samples: int
    n_features: int


def effective_dim(features, threshold: float = DEFAULT_THRESHOLD) -> SpectrumReport:
    """Smallest k whose top-k covariance eigenvalues reach the threshold.

    Columns are centered with a two-pass mean; the spectrum comes from the
    singular values of the centered matrix (never forming the covariance
    explicitly), clipped at zero from below.  All-identical rows have no
    variance to explain and raise DegenerateDataError.
    """
    X = check_matrix(features, "features")
    threshold = check_scalar(threshold, "threshold", gt=0.0, le=1.0)
    n, p = X.shape
    if n < 2:
        raise DomainError("need at least two rows to estimate a covariance")
    centered = X - X.mean(axis=0)
    centered -= centered.mean(axis=0)   # second pass kills roundoff drift
    svals = np.linalg.svd(centered, compute_uv=False)
    eigs = np.maximum(svals * svals / (n - 1), _EIG_CLIP)
    total = float(eigs.sum())
    if total <= 0.0:
        raise DegenerateDataError("all rows identical: rank-0 covariance")
    cum = np.cumsum(eigs) / total
    cum[-1] = 1.0
    k = int(np.searchsorted(cum, threshold * (1.0 - 1e-12), side="left")) + 1
    return SpectrumReport(
        eigenvalues=tuple(float(v) for v in eigs),
        cumulative_variance_fraction=tuple(float(v) for v in cum),
        effective_dim=k,
        threshold=threshold,
        n_samples=n,
        n_features=p,
    )


def load_feature_table(path, labels_col: str | None = None,
                       delimiter: str | None = None) -> tuple[np.ndarray, list[str]]:
    """Read a delimited text file with a one-line header into a matrix.

    labels_col names a column to drop (the labels of the file, irrelevant
    to the spectrum).  The delimiter is sniffed from the header when not
    given.  Non-finite or non-numeric entries are rejected.
    """
    with open(path, "r", newline="") as fh:
        text = fh.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise DomainError(f"{path}: need a header line and at least one data row")
    if delimiter is None:
        try:
            delimiter = csv.Sniffer().sniff(lines[0], delimiters=",;\t ").delimiter
        except csv.Error:
            delimiter = ","
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    header = [h.strip() for h in next(reader)]
    drop = None
    if labels_col is not None:
        if labels_col not in header:
            raise DomainError(
                f"labels column '{labels_col}' not in header {header}")
        drop = header.index(labels_col)
    rows = []
    for i, row in enumerate(reader, start=2):
        cells = [c for c in row if c.strip() != ""] if row and row[-1] == "" else row
        if not cells:
            continue
        if len(cells) != len(header):
            raise DomainError(
                f"{path}: row {i} has {len(cells)} fields, header has {len(header)}")
        if drop is not None:
            cells = cells[:drop] + cells[drop + 1:]
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise DomainError(f"{path}: non-numeric entry in row {i}") from exc
    kept = [h for j, h in enumerate(header) if j != drop]
    X = np.asarray(rows, dtype=float)
    if X.size == 0 or X.ndim != 2:
        raise DomainError(f"{path}: no numeric data rows")
    if not np.all(np.isfinite(X)):
        raise DomainError(f"{path}: non-finite entries rejected on load")
    return X, kept
