"""Input validation helpers used across the estimator and metric surfaces."""

from __future__ import annotations

import numpy as np

from .errors import EmptySample, LengthMismatch

__all__ = ["as_float_vector", "as_float_matrix", "paired_vectors"]


def as_float_vector(x, name: str = "x") -> np.ndarray:
    """Coerce to a 1-D float64 array, rejecting NaN and infinities."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_float_matrix(x, name: str = "X") -> np.ndarray:
    """Coerce to a 2-D float64 array, rejecting NaN and infinities."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def paired_vectors(actual, predicted) -> tuple[np.ndarray, np.ndarray]:
    """Validate an (actual, predicted) pair: equal lengths, at least one value."""
    y = as_float_vector(actual, "actual")
    yhat = as_float_vector(predicted, "predicted")
    if y.shape[0] != yhat.shape[0]:
        raise LengthMismatch(
            f"actual has {y.shape[0]} values, predicted has {yhat.shape[0]}"
        )
    if y.shape[0] == 0:
        raise EmptySample("need at least one (actual, predicted) pair")
    return y, yhat
