"""Forecast error metrics: MAPE, MAE, and signed bias.

Sign convention: errors are actual minus predicted, so a negative bias
means the forecaster overestimates on average.
"""

from __future__ import annotations

import numpy as np

from .errors import ZeroActual
from .validation import paired_vectors

__all__ = ["mape", "mae", "bias"]


def mape(actual, predicted) -> float:
    """Mean absolute percentage error, in percent.

    Every actual value must be nonzero; raises :class:`ZeroActual` otherwise.
    """
    y, yhat = paired_vectors(actual, predicted)
    if np.any(y == 0.0):
        raise ZeroActual("MAPE is undefined when an actual value is zero")
    return float(np.mean(np.abs(y - yhat) / np.abs(y)) * 100.0)


def mae(actual, predicted) -> float:
    """Mean absolute error, in the units of the variable."""
    y, yhat = paired_vectors(actual, predicted)
    return float(np.mean(np.abs(y - yhat)))


def bias(actual, predicted) -> float:
    """Mean signed error (actual minus predicted)."""
    y, yhat = paired_vectors(actual, predicted)
    return float(np.mean(y - yhat))
