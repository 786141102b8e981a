"""Small input-validation helpers used by the public entry points."""

from __future__ import annotations

import numbers

import numpy as np

from .errors import DomainError


def check_scalar(value, name: str, *, gt=None, ge=None, lt=None, le=None, finite=True) -> float:
    """Validate a real scalar against open/closed bounds and return it as float."""
    if not isinstance(value, numbers.Real) or isinstance(value, bool):
        raise DomainError(f"{name} must be a real scalar, got {value!r}")
    value = float(value)
    if finite and not np.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    if gt is not None and not value > gt:
        raise DomainError(f"{name} must be > {gt}, got {value}")
    if ge is not None and not value >= ge:
        raise DomainError(f"{name} must be >= {ge}, got {value}")
    if lt is not None and not value < lt:
        raise DomainError(f"{name} must be < {lt}, got {value}")
    if le is not None and not value <= le:
        raise DomainError(f"{name} must be <= {le}, got {value}")
    return value


def check_positive_int(value, name: str, *, ge: int = 1) -> int:
    if not isinstance(value, numbers.Integral) or isinstance(value, bool):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < ge:
        raise DomainError(f"{name} must be >= {ge}, got {value}")
    return value


def check_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce to a 2-D float array and reject non-finite entries."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DomainError(f"{name} must be 2-dimensional, got shape {X.shape}")
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise DomainError(f"{name} must be non-empty, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DomainError(f"{name} contains non-finite entries")
    return X


def check_labels(y, n: int, name: str = "y") -> np.ndarray:
    """Validate a +/-1 label vector of length n."""
    y = np.asarray(y, dtype=float).ravel()
    if y.shape[0] != n:
        raise DomainError(f"{name} has length {y.shape[0]}, expected {n}")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise DomainError(f"{name} must take values in {{-1, +1}}")
    return y
