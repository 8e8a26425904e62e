"""Residual autocorrelation diagnostics.

The autocorrelation estimator divides by the full-sample sum of squares
(the biased convention), which keeps every coefficient in [-1, 1] and is
the convention behind the standard +-1.96/sqrt(N) significance bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConstantSeries, TooShort
from .validation import as_float_vector

__all__ = ["AcfResult", "WhitenessResult", "acf", "residual_whiteness", "DEFAULT_MAX_LAG"]

DEFAULT_MAX_LAG = 100

AUTOCORRELATED = "autocorrelated"
WHITE = "consistent with white noise"


@dataclass(frozen=True)
class AcfResult:
    """Coefficients r_1..r_K with their significance bound.

    r_0 = 1 by definition and is not stored. ``exceed_fraction`` is the
    fraction of lags 1..K whose |r_k| exceeds ``bound``.
    """

    coefficients: np.ndarray
    bound: float
    n: int
    exceed_fraction: float

    @property
    def max_lag(self) -> int:
        return self.coefficients.shape[0]

    def r(self, lag: int) -> float:
        if lag == 0:
            return 1.0
        return float(self.coefficients[lag - 1])


@dataclass(frozen=True)
class WhitenessResult:
    acf: AcfResult
    verdict: str


def acf(residuals: Sequence[float] | np.ndarray, max_lag: int = DEFAULT_MAX_LAG) -> AcfResult:
    """Autocorrelation of a residual series at lags 1..max_lag.

    r_k = sum_{t=1..N-k} (e_t - mean)(e_{t+k} - mean) / sum (e_t - mean)^2,
    with the significance bound 1.96/sqrt(N).
    """
    e = as_float_vector(residuals, "residuals")
    n = e.shape[0]
    if max_lag < 1:
        raise ValueError(f"max_lag must be >= 1, got {max_lag}")
    if n < max_lag + 1:
        raise TooShort(f"need at least {max_lag + 1} residuals for lag {max_lag}, got {n}")
    centered = e - e.mean()
    denom = float(np.dot(centered, centered))
    if denom == 0.0:
        raise ConstantSeries("residual series has zero variance")
    coeffs = np.empty(max_lag, dtype=np.float64)
    for k in range(1, max_lag + 1):
        coeffs[k - 1] = float(np.dot(centered[:-k], centered[k:])) / denom
    bound = 1.96 / np.sqrt(n)
    exceed = float(np.mean(np.abs(coeffs) > bound))
    return AcfResult(coefficients=coeffs, bound=float(bound), n=n, exceed_fraction=exceed)


def residual_whiteness(pairs, max_lag: int = DEFAULT_MAX_LAG) -> WhitenessResult:
    """ACF of observed-minus-forecast residuals, with a whiteness verdict.

    Pairs must be sorted by valid time. Gaps in the hourly record are
    closed by concatenation rather than imputation, so coefficients at a
    gap mix slightly longer physical lags. The verdict is "autocorrelated"
    when more than 5% of the lags breach the significance bound.
    """
    residuals = np.array(
        [p.observed_value - p.forecast_value for p in pairs], dtype=np.float64
    )
    result = acf(residuals, max_lag=max_lag)
    verdict = AUTOCORRELATED if result.exceed_fraction > 0.05 else WHITE
    return WhitenessResult(acf=result, verdict=verdict)
