"""Forecast-uncertainty audit and solar-PV generation forecasting toolkit.

The package quantifies how multi-day weather forecasts err against
observations (bias, MAE, bootstrap CIs, residual autocorrelation), selects
weather predictors of daily peak PV energy, trains a small
Levenberg-Marquardt neural model, and measures how weather-forecast error
propagates into energy-forecast error. ``helios-audit`` exposes the same
pipeline as a command-line tool.
"""

from .diagnostics import AcfResult, WhitenessResult, acf, residual_whiteness
from .errors import (
    ComputationError,
    HeliosError,
    InputDataError,
    ParseError,
    SingularSystem,
)
from .experiment import (
    LeadDayEvaluation,
    ScenarioSpec,
    SplitSpec,
    SubsetSweepResult,
    TrainedModel,
    evaluate_lead_days,
    sensitivity,
    subset_sweep,
    train_model,
)
from .ingest import (
    AlignedPair,
    EnergyRecord,
    ForecastRecord,
    ForecastSeries,
    ObservationRecord,
    ObservationSeries,
    PeakDataset,
    WeatherVariable,
    align,
    categorize_forecast_sky,
    categorize_observed_sky,
    extract_peaks,
    parse_energy_csv,
    parse_forecast_csv,
    parse_observed_csv,
)
from .metrics import bias, mae, mape
from .mlp import (
    LevenbergMarquardtRegressor,
    LmConfig,
    TrainResult,
    forward,
    jacobian,
    train_lm,
)
from .resample import BootstrapConfig, CiEstimate, ErrorStats, bootstrap_ci, error_stats
from .select import (
    CorrMatrix,
    SelectionReport,
    correlation_matrix,
    pearson,
    select_from_matrix,
    select_predictors,
)
from .synth import GroundTruth, SynthConfig, generate

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # ingest
    "WeatherVariable", "ObservationRecord", "ObservationSeries", "ForecastRecord",
    "ForecastSeries", "EnergyRecord", "AlignedPair", "PeakDataset",
    "categorize_observed_sky", "categorize_forecast_sky",
    "parse_observed_csv", "parse_forecast_csv", "parse_energy_csv",
    "align", "extract_peaks",
    # metrics
    "mape", "mae", "bias",
    # resampling
    "BootstrapConfig", "CiEstimate", "ErrorStats", "bootstrap_ci", "error_stats",
    # diagnostics
    "AcfResult", "WhitenessResult", "acf", "residual_whiteness",
    # selection
    "pearson", "CorrMatrix", "correlation_matrix", "SelectionReport",
    "select_predictors", "select_from_matrix",
    # model
    "LevenbergMarquardtRegressor", "LmConfig", "TrainResult",
    "forward", "jacobian", "train_lm",
    # experiments
    "SplitSpec", "TrainedModel", "train_model", "LeadDayEvaluation",
    "evaluate_lead_days", "ScenarioSpec", "sensitivity", "SubsetSweepResult",
    "subset_sweep",
    # synthetic data
    "SynthConfig", "GroundTruth", "generate",
    # errors
    "HeliosError", "InputDataError", "ComputationError", "ParseError", "SingularSystem",
]
