"""The three model experiments: lead-day evaluation, one-variable-perfect
sensitivity scenarios, and the exhaustive 31-subset predictor sweep.

The model is always trained on observed weather at the daily peak hour and
then *applied* to forecast weather — it is never retrained per scenario.
Rows missing a required input are skipped and counted, never imputed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySample, NoUsableRows, TooShort, UnknownVariable
from .ingest import DEFAULT_CAPACITY_KWH, LEAD_DAYS, PeakDataset, WeatherVariable
from .metrics import mae as mae_metric
from .metrics import mape as mape_metric
from .mlp import DEFAULT_HIDDEN, LevenbergMarquardtRegressor
from .seeding import seed_sequence, substream_seed

__all__ = [
    "SplitSpec",
    "split_indices",
    "TrainedModel",
    "train_model",
    "Metrics",
    "LeadDayEvaluation",
    "evaluate_lead_days",
    "ScenarioSpec",
    "sensitivity",
    "SubsetResult",
    "SubsetSweepResult",
    "subset_sweep",
    "all_subsets",
]


@dataclass(frozen=True)
class SplitSpec:
    """Shuffled train/validation split proportions."""

    train_fraction: float = 0.8
    validation_fraction: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.train_fraction <= 0.0 or self.validation_fraction <= 0.0:
            raise ValueError("split fractions must be positive")
        if abs(self.train_fraction + self.validation_fraction - 1.0) > 1e-9:
            raise ValueError("split fractions must sum to 1")


def split_indices(n: int, spec: SplitSpec) -> tuple[np.ndarray, np.ndarray]:
    """Permute 0..n-1 once and cut into (train, validation) index arrays.

    Both sides are guaranteed nonempty, so n must be at least 2.
    """
    if n < 2:
        raise TooShort(f"need at least 2 rows to split, got {n}")
    rng = np.random.default_rng(seed_sequence(spec.seed, "split"))
    perm = rng.permutation(n)
    n_train = int(round(spec.train_fraction * n))
    n_train = max(1, min(n - 1, n_train))
    return perm[:n_train], perm[n_train:]


@dataclass(frozen=True)
class Metrics:
    """Error metrics of one evaluation cell."""

    n: int
    skipped: int
    mape: float
    mae: float


@dataclass(frozen=True)
class TrainedModel:
    """A fitted estimator plus everything needed to reuse it downstream."""

    estimator: LevenbergMarquardtRegressor
    inputs: tuple[WeatherVariable, ...]
    usable_rows: np.ndarray        # indices into dataset.rows that fed the fit
    train_positions: np.ndarray    # positions within usable_rows
    validation_positions: np.ndarray
    rows_skipped: int
    validation_mse: float
    validation_mape: float
    seed: int
    restarts: int


def _usable(M: np.ndarray) -> np.ndarray:
    return np.flatnonzero(np.isfinite(M).all(axis=1))


def train_model(
    dataset: PeakDataset,
    variables: tuple[WeatherVariable, ...] | list[WeatherVariable],
    seed: int = 0,
    hidden: int = DEFAULT_HIDDEN,
    max_iter: int = 200,
    restarts: int = 1,
    split: SplitSpec | None = None,
    capacity: float = DEFAULT_CAPACITY_KWH,
) -> TrainedModel:
    """Fit the energy model on observed inputs at the daily peak hour.

    Rows missing any selected input are dropped (and counted). The data
    is split once; with ``restarts`` > 1, that many independently seeded
    fits run on the same split and the lowest-validation-MSE model wins
    (ties to the earliest restart).
    """
    variables = tuple(variables)
    if not variables:
        raise ValueError("at least one input variable is required")
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    if split is None:
        split = SplitSpec(seed=substream_seed(seed, "split"))

    M = dataset.observed_matrix(variables)
    y_all = dataset.energy()
    usable = _usable(M)
    if usable.size == 0:
        raise EmptySample("no rows with all selected inputs present")
    X = M[usable]
    y = y_all[usable]

    train_pos, val_pos = split_indices(usable.size, split)
    X_train, y_train = X[train_pos], y[train_pos]
    X_val, y_val = X[val_pos], y[val_pos]

    best = None
    for r in range(restarts):
        est = LevenbergMarquardtRegressor(
            hidden=hidden,
            max_iter=max_iter,
            capacity=capacity,
            seed=substream_seed(seed, "restart", r),
        )
        est.fit(X_train, y_train)
        pred = est.predict(X_val)
        val_mse = float(np.mean((y_val - pred) ** 2))
        if best is None or val_mse < best[0]:
            best = (val_mse, est, float(mape_metric(y_val, pred)))

    val_mse, est, val_mape = best
    return TrainedModel(
        estimator=est,
        inputs=variables,
        usable_rows=usable,
        train_positions=train_pos,
        validation_positions=val_pos,
        rows_skipped=len(dataset) - usable.size,
        validation_mse=val_mse,
        validation_mape=val_mape,
        seed=seed,
        restarts=restarts,
    )


def _metrics(actual: np.ndarray, predicted: np.ndarray, skipped: int) -> Metrics:
    return Metrics(
        n=actual.size,
        skipped=skipped,
        mape=float(mape_metric(actual, predicted)),
        mae=float(mae_metric(actual, predicted)),
    )


@dataclass(frozen=True)
class LeadDayEvaluation:
    """Energy-forecast error per lead day against two observed-input baselines.

    ``baseline`` uses every row with complete observed inputs;
    ``baseline_validation`` restricts to the held-out validation rows.
    """

    baseline: Metrics
    baseline_validation: Metrics
    days: dict[int, Metrics]


def evaluate_lead_days(model: TrainedModel, dataset: PeakDataset) -> LeadDayEvaluation:
    """Predict peak energy from lead-1..6 forecast inputs and score each day.

    Per day, rows missing any required forecast input are skipped and
    counted; a day with zero complete rows raises :class:`NoUsableRows`.
    """
    est = model.estimator
    y_all = dataset.energy()

    M_obs = dataset.observed_matrix(model.inputs)
    usable = _usable(M_obs)
    if usable.size == 0:
        raise NoUsableRows("no rows with complete observed inputs")
    baseline = _metrics(
        y_all[usable], est.predict(M_obs[usable]), len(dataset) - usable.size
    )

    val_rows = model.usable_rows[model.validation_positions]
    baseline_val = _metrics(
        y_all[val_rows], est.predict(M_obs[val_rows]), 0
    )

    days: dict[int, Metrics] = {}
    for d in LEAD_DAYS:
        M_fc = dataset.forecast_matrix(model.inputs, d)
        rows = _usable(M_fc)
        if rows.size == 0:
            raise NoUsableRows(f"no rows with complete lead-{d} forecast inputs")
        days[d] = _metrics(
            y_all[rows], est.predict(M_fc[rows]), len(dataset) - rows.size
        )
    return LeadDayEvaluation(baseline=baseline, baseline_validation=baseline_val, days=days)


@dataclass(frozen=True)
class ScenarioSpec:
    """One sensitivity scenario: this variable's forecast is replaced by its
    observed value; all other model inputs stay forecasts."""

    perfect_variable: WeatherVariable


def sensitivity(
    model: TrainedModel, dataset: PeakDataset, spec: ScenarioSpec
) -> dict[int, Metrics]:
    """Per-lead-day error when one input is fed perfect (observed) data."""
    if spec.perfect_variable not in model.inputs:
        raise UnknownVariable(
            f"{spec.perfect_variable.code} is not one of the model inputs"
        )
    est = model.estimator
    y_all = dataset.energy()
    col = model.inputs.index(spec.perfect_variable)
    obs_col = dataset.observed_matrix((spec.perfect_variable,))[:, 0]

    curve: dict[int, Metrics] = {}
    for d in LEAD_DAYS:
        M = dataset.forecast_matrix(model.inputs, d).copy()
        M[:, col] = obs_col
        rows = _usable(M)
        if rows.size == 0:
            raise NoUsableRows(f"no usable rows for scenario at lead day {d}")
        curve[d] = _metrics(
            y_all[rows], est.predict(M[rows]), len(dataset) - rows.size
        )
    return curve


def all_subsets() -> list[tuple[WeatherVariable, ...]]:
    """The 31 nonempty predictor subsets, in (size, canonical order) order
    of bitmask over the canonical variable list."""
    variables = list(WeatherVariable)
    subsets: list[tuple[WeatherVariable, ...]] = []
    for mask in range(1, 2 ** len(variables)):
        subsets.append(tuple(v for i, v in enumerate(variables) if mask >> i & 1))
    return subsets


@dataclass(frozen=True)
class SubsetResult:
    mask: int
    variables: tuple[WeatherVariable, ...]
    validation_mape: float
    validation_mse: float


@dataclass(frozen=True)
class SubsetSweepResult:
    """Validation error of one model per nonempty predictor subset."""

    entries: tuple[SubsetResult, ...]

    def ranked(self) -> list[SubsetResult]:
        return sorted(self.entries, key=lambda e: (e.validation_mape, e.mask))

    @property
    def best(self) -> SubsetResult:
        return self.ranked()[0]


def subset_sweep(
    dataset: PeakDataset,
    seed: int = 0,
    hidden: int = DEFAULT_HIDDEN,
    max_iter: int = 200,
    capacity: float = DEFAULT_CAPACITY_KWH,
) -> SubsetSweepResult:
    """Train one model per nonempty predictor subset and record validation MAPE.

    Each subset gets its own seed derived from (seed, subset mask), so the
    31 trainings are independent yet individually reproducible.
    """
    entries = []
    variables = list(WeatherVariable)
    for mask in range(1, 2 ** len(variables)):
        subset = tuple(v for i, v in enumerate(variables) if mask >> i & 1)
        trained = train_model(
            dataset,
            subset,
            seed=substream_seed(seed, "subset", mask),
            hidden=hidden,
            max_iter=max_iter,
            restarts=1,
            capacity=capacity,
        )
        entries.append(SubsetResult(
            mask=mask,
            variables=subset,
            validation_mape=trained.validation_mape,
            validation_mse=trained.validation_mse,
        ))
    return SubsetSweepResult(entries=tuple(entries))
