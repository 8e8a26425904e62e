"""Shared fixtures: one small synthetic dataset generated once per session.

Sixty days is enough for every structural test (alignment, selection,
training, CLI round trips) while keeping the suite fast; statistical
recovery tests that need a full year generate their own data.
"""

import pytest

from helios_audit.ingest import (
    extract_peaks,
    parse_energy_csv,
    parse_forecast_csv,
    parse_observed_csv,
)
from helios_audit.synth import SynthConfig, generate

SMALL_DAYS = 60
SMALL_SEED = 0


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    """Directory with observed.csv, forecast.csv, energy.csv (60 days, seed 0)."""
    out = tmp_path_factory.mktemp("synthdata")
    generate(SynthConfig(days=SMALL_DAYS, seed=SMALL_SEED), out)
    return out


@pytest.fixture(scope="session")
def obs_series(data_dir):
    return parse_observed_csv(data_dir / "observed.csv")


@pytest.fixture(scope="session")
def fc_series(data_dir):
    return parse_forecast_csv(data_dir / "forecast.csv")


@pytest.fixture(scope="session")
def peaks(data_dir, obs_series, fc_series):
    energy = parse_energy_csv(data_dir / "energy.csv")
    return extract_peaks(energy, obs_series, fc_series)
