"""Correlation analysis and predictor selection for the daily-peak dataset.

Selection is a two-stage filter on observed-weather predictors of peak
energy: keep variables whose |r| against energy clears a target threshold,
then walk the survivors from strongest to weakest and drop any candidate
whose |r| with an already-kept variable exceeds a collinearity threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstantVector, EmptySample, LengthMismatch
from .ingest import PeakDataset, WeatherVariable

__all__ = [
    "pearson",
    "CorrMatrix",
    "correlation_matrix",
    "Exclusion",
    "SelectionReport",
    "select_predictors",
    "select_from_matrix",
    "DEFAULT_TARGET_THRESHOLD",
    "DEFAULT_COLLINEARITY_THRESHOLD",
    "LOW_TARGET_CORRELATION",
    "COLLINEAR_WITH_STRONGER",
]

DEFAULT_TARGET_THRESHOLD = 0.2
DEFAULT_COLLINEARITY_THRESHOLD = 0.8

LOW_TARGET_CORRELATION = "LowTargetCorrelation"
COLLINEAR_WITH_STRONGER = "CollinearWithStronger"

ENERGY_LABEL = "energy"


def pearson(x, y) -> float:
    """Sample Pearson correlation of two equal-length vectors.

    Needs at least three pairs; either vector being constant raises
    :class:`ConstantVector` (the coefficient is undefined).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1:
        raise ValueError("pearson expects 1-D vectors")
    if x.size != y.size:
        raise LengthMismatch(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 3:
        raise EmptySample(f"pearson needs at least 3 pairs, got {x.size}")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = np.sqrt(np.sum(dx * dx))
    sy = np.sqrt(np.sum(dy * dy))
    if sx == 0.0 or sy == 0.0:
        raise ConstantVector("pearson is undefined for a constant vector")
    return float(np.sum(dx * dy) / (sx * sy))


@dataclass(frozen=True)
class CorrMatrix:
    """Symmetric correlation matrix with row/column labels.

    ``counts[i, j]`` is the number of complete pairs behind ``values[i, j]``.
    """

    labels: tuple[str, ...]
    values: np.ndarray
    counts: np.ndarray

    def get(self, a: str, b: str) -> float:
        i = self.labels.index(a)
        j = self.labels.index(b)
        return float(self.values[i, j])


def correlation_matrix(dataset: PeakDataset) -> CorrMatrix:
    """Pairwise-complete correlations of peak energy and observed weather.

    Labels are ``energy`` followed by the weather column names. Each cell
    uses only rows where both columns are present; cells with fewer than
    three complete pairs, or with a constant column, come back NaN.
    """
    variables = list(WeatherVariable)
    labels = (ENERGY_LABEL,) + tuple(var.column for var in variables)
    columns = np.column_stack([
        dataset.energy(),
        dataset.observed_matrix(variables),
    ])
    k = columns.shape[1]
    values = np.eye(k)
    counts = np.full((k, k), columns.shape[0], dtype=np.int64)
    for i in range(k):
        counts[i, i] = int(np.sum(np.isfinite(columns[:, i])))
    for i in range(k):
        for j in range(i + 1, k):
            mask = np.isfinite(columns[:, i]) & np.isfinite(columns[:, j])
            n = int(np.sum(mask))
            counts[i, j] = counts[j, i] = n
            try:
                r = pearson(columns[mask, i], columns[mask, j])
            except (EmptySample, ConstantVector):
                r = np.nan
            values[i, j] = values[j, i] = r
    return CorrMatrix(labels=labels, values=values, counts=counts)


@dataclass(frozen=True)
class Exclusion:
    variable: WeatherVariable
    reason: str
    detail: str


@dataclass(frozen=True)
class SelectionReport:
    selected: tuple[WeatherVariable, ...]
    excluded: tuple[Exclusion, ...]
    target_correlations: dict[WeatherVariable, float]
    matrix: CorrMatrix


def select_predictors(
    dataset: PeakDataset,
    target_threshold: float = DEFAULT_TARGET_THRESHOLD,
    collinearity_threshold: float = DEFAULT_COLLINEARITY_THRESHOLD,
) -> SelectionReport:
    """Pick observed-weather predictors of peak energy from a peak dataset."""
    return select_from_matrix(
        correlation_matrix(dataset),
        target_threshold=target_threshold,
        collinearity_threshold=collinearity_threshold,
    )


def select_from_matrix(
    matrix: CorrMatrix,
    target_threshold: float = DEFAULT_TARGET_THRESHOLD,
    collinearity_threshold: float = DEFAULT_COLLINEARITY_THRESHOLD,
) -> SelectionReport:
    """Run the two-stage filter on an already-computed correlation matrix.

    Stage 1 drops variables with |r(energy, v)| <= ``target_threshold``
    (NaN correlations count as failing). Stage 2 visits the survivors in
    decreasing |r(energy, v)| — ties broken by canonical variable order —
    and drops any candidate whose |r| with an already-selected variable
    exceeds ``collinearity_threshold``. Selected variables come back in
    canonical order.
    """
    if not 0.0 <= target_threshold < 1.0:
        raise ValueError(f"target_threshold must lie in [0, 1), got {target_threshold}")
    if not 0.0 < collinearity_threshold <= 1.0:
        raise ValueError(f"collinearity_threshold must lie in (0, 1], got {collinearity_threshold}")

    variables = list(WeatherVariable)
    target = {
        var: matrix.get(ENERGY_LABEL, var.column)
        for var in variables
    }

    excluded: list[Exclusion] = []
    survivors: list[WeatherVariable] = []
    for var in variables:
        r = target[var]
        if not np.isfinite(r) or abs(r) <= target_threshold:
            shown = "undefined" if not np.isfinite(r) else f"{r:.3f}"
            excluded.append(Exclusion(
                variable=var,
                reason=LOW_TARGET_CORRELATION,
                detail=f"|r| with energy is {shown}, threshold {target_threshold}",
            ))
        else:
            survivors.append(var)

    order = {var: i for i, var in enumerate(variables)}
    ranked = sorted(survivors, key=lambda var: (-abs(target[var]), order[var]))

    selected: list[WeatherVariable] = []
    for var in ranked:
        clash = None
        for kept in selected:
            r = matrix.get(var.column, kept.column)
            if np.isfinite(r) and abs(r) > collinearity_threshold:
                clash = (kept, r)
                break
        if clash is None:
            selected.append(var)
        else:
            kept, r = clash
            excluded.append(Exclusion(
                variable=var,
                reason=COLLINEAR_WITH_STRONGER,
                detail=f"|r| with {kept.column} is {abs(r):.3f}, threshold {collinearity_threshold}",
            ))

    selected.sort(key=lambda var: order[var])
    excluded.sort(key=lambda exc: order[exc.variable])
    return SelectionReport(
        selected=tuple(selected),
        excluded=tuple(excluded),
        target_correlations=target,
        matrix=matrix,
    )
