"""Input validation helpers."""

from __future__ import annotations

import numpy as np

from .exceptions import DataError, ValidationError


def as_series(x, name: str = "y", min_length: int = 1) -> np.ndarray:
    """Coerce ``x`` to a 1-d float64 array of finite values.

    Raises
    ------
    DataError
        If the input is not one-dimensional, too short, or contains
        NaN/inf entries.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise DataError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_length:
        raise DataError(f"{name} must have at least {min_length} observations, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite values")
    return arr


def as_coefficients(x, name: str) -> np.ndarray:
    """Coerce a coefficient vector to 1-d float64 (may be empty)."""
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be a vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    return arr


def check_positive_int(value, name: str) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise ValidationError(f"{name} must be >= 1, got {value}")
    return int(value)


def check_quantile_levels(beta1: float, beta2: float) -> tuple[float, float]:
    beta1 = float(beta1)
    beta2 = float(beta2)
    if not (0.0 < beta1 < beta2 < 1.0):
        raise ValidationError(
            f"quantile levels must satisfy 0 < beta1 < beta2 < 1, got ({beta1}, {beta2})"
        )
    return beta1, beta2
