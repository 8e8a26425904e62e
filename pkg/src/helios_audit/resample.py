"""Bootstrap confidence intervals for mean-type error statistics.

Resamples with replacement, computes the statistic per resample, and takes
empirical percentiles. Each replicate owns an RNG substream derived from
(seed, replicate index), so results are bit-identical whether replicates
run serially or across any number of worker threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Sequence

import numpy as np

from .errors import EmptySample
from .metrics import bias as bias_metric
from .metrics import mae as mae_metric
from .seeding import seed_sequence, substream_seed
from .validation import as_float_vector

if TYPE_CHECKING:
    from .ingest import AlignedPair, WeatherVariable

__all__ = ["BootstrapConfig", "CiEstimate", "ErrorStats", "bootstrap_ci", "error_stats"]

DEFAULT_CYCLES = 2500
DEFAULT_CONFIDENCE = 0.95


@dataclass(frozen=True)
class BootstrapConfig:
    cycles: int = DEFAULT_CYCLES
    confidence: float = DEFAULT_CONFIDENCE
    seed: int = 0

    def __post_init__(self):
        if self.cycles < 1:
            raise ValueError(f"cycles must be >= 1, got {self.cycles}")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError(f"confidence must lie in (0, 1), got {self.confidence}")


@dataclass(frozen=True)
class CiEstimate:
    """Point estimate plus percentile confidence bounds (lower <= upper)."""

    point: float
    lower: float
    upper: float


@dataclass(frozen=True)
class ErrorStats:
    """Bias and MAE of one (variable, lead day) cell, with bootstrap CIs."""

    variable: "WeatherVariable"
    lead_day: int
    n: int
    bias: float
    mae: float
    bias_ci: CiEstimate
    mae_ci: CiEstimate
    drops: int = 0


def _replicate_stats(
    values: np.ndarray,
    cfg: BootstrapConfig,
    statistic: Callable[[np.ndarray], float],
    workers: int,
) -> np.ndarray:
    n = values.shape[0]
    out = np.empty(cfg.cycles, dtype=np.float64)

    def run_range(lo: int, hi: int) -> None:
        for i in range(lo, hi):
            rng = np.random.default_rng(seed_sequence(cfg.seed, i))
            idx = rng.integers(0, n, size=n)
            out[i] = statistic(values[idx])

    if workers <= 1:
        run_range(0, cfg.cycles)
    else:
        chunk = -(-cfg.cycles // workers)
        bounds = [(k * chunk, min((k + 1) * chunk, cfg.cycles)) for k in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_range, lo, hi) for lo, hi in bounds if lo < hi]
            for f in futures:
                f.result()
    return out


def bootstrap_ci(
    values: Sequence[float] | np.ndarray,
    cfg: BootstrapConfig = BootstrapConfig(),
    statistic: Callable[[np.ndarray], float] = np.mean,
    workers: int = 1,
) -> CiEstimate:
    """Percentile bootstrap CI for a mean-type statistic of ``values``.

    The point estimate is the statistic on the original sample; the bounds
    are the (1-confidence)/2 and 1-(1-confidence)/2 empirical percentiles
    of the replicate statistics, with linear interpolation between order
    statistics.
    """
    arr = as_float_vector(values, "values")
    if arr.size == 0:
        raise EmptySample("cannot bootstrap an empty sample")
    stats = _replicate_stats(arr, cfg, statistic, workers)
    alpha = (1.0 - cfg.confidence) / 2.0
    lower = float(np.percentile(stats, alpha * 100.0, method="linear"))
    upper = float(np.percentile(stats, (1.0 - alpha) * 100.0, method="linear"))
    return CiEstimate(point=float(statistic(arr)), lower=lower, upper=upper)


def error_stats(
    pairs: Sequence["AlignedPair"],
    cfg: BootstrapConfig = BootstrapConfig(),
    drops: int = 0,
    workers: int = 1,
) -> ErrorStats:
    """Bias, MAE, and their bootstrap CIs for one aligned (variable, lead day) cell.

    All pairs must share the same variable and lead day. The bias CI
    bootstraps the signed errors; the MAE CI bootstraps their absolute
    values. Substreams for the two intervals are derived from cfg.seed.
    """
    if not pairs:
        raise EmptySample("no aligned pairs to audit")
    variable = pairs[0].variable
    lead_day = pairs[0].lead_day
    for p in pairs:
        if p.variable is not variable or p.lead_day != lead_day:
            raise ValueError("pairs must share one variable and one lead day")

    observed = np.array([p.observed_value for p in pairs], dtype=np.float64)
    forecast = np.array([p.forecast_value for p in pairs], dtype=np.float64)
    errors = observed - forecast

    bias_cfg = BootstrapConfig(cfg.cycles, cfg.confidence, substream_seed(cfg.seed, "bias"))
    mae_cfg = BootstrapConfig(cfg.cycles, cfg.confidence, substream_seed(cfg.seed, "mae"))
    return ErrorStats(
        variable=variable,
        lead_day=lead_day,
        n=len(pairs),
        bias=bias_metric(observed, forecast),
        mae=mae_metric(observed, forecast),
        bias_ci=bootstrap_ci(errors, bias_cfg, workers=workers),
        mae_ci=bootstrap_ci(np.abs(errors), mae_cfg, workers=workers),
        drops=drops,
    )
