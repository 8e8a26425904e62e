"""Autocorrelation estimator and whiteness verdicts."""

import datetime as dt
import math

import numpy as np
import pytest

from helios_audit.diagnostics import (
    AUTOCORRELATED,
    WHITE,
    AcfResult,
    acf,
    residual_whiteness,
)
from helios_audit.errors import ConstantSeries, TooShort
from helios_audit.ingest import AlignedPair, WeatherVariable


def brute_force_acf(e, max_lag):
    """Direct transcription of the estimator definition."""
    e = list(map(float, e))
    n = len(e)
    mean = math.fsum(e) / n
    c = [v - mean for v in e]
    denom = math.fsum(v * v for v in c)
    return [
        math.fsum(c[t] * c[t + k] for t in range(n - k)) / denom
        for k in range(1, max_lag + 1)
    ]


class TestAcf:
    def test_alternating_series_hand_values(self):
        # e = [1,-1,1,-1]: mean 0, denom 4; r_1 = -3/4, r_2 = 2/4, r_3 = -1/4.
        result = acf([1.0, -1.0, 1.0, -1.0], max_lag=3)
        assert result.r(1) == pytest.approx(-0.75)
        assert result.r(2) == pytest.approx(0.5)
        assert result.r(3) == pytest.approx(-0.25)
        assert result.r(0) == 1.0
        assert result.n == 4
        assert result.bound == pytest.approx(1.96 / 2.0)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(55)
        for _ in range(10):
            n = int(rng.integers(10, 200))
            e = rng.normal(0, 1, n) + rng.uniform(-3, 3)
            max_lag = int(rng.integers(1, n))
            result = acf(e, max_lag=max_lag)
            expected = brute_force_acf(e, max_lag)
            assert np.allclose(result.coefficients, expected, rtol=1e-10, atol=1e-12)

    def test_linear_trend_is_strongly_autocorrelated(self):
        result = acf(np.arange(200.0), max_lag=10)
        assert result.r(1) > 0.9
        assert result.exceed_fraction == 1.0

    def test_white_noise_exceeds_rarely(self):
        e = np.random.default_rng(123).standard_normal(1000)
        result = acf(e, max_lag=100)
        assert result.exceed_fraction <= 0.10
        assert result.bound == pytest.approx(1.96 / math.sqrt(1000))

    def test_coefficients_bounded(self):
        rng = np.random.default_rng(77)
        for _ in range(5):
            e = rng.normal(0, 5, 100)
            result = acf(e, max_lag=99)
            assert np.all(np.abs(result.coefficients) <= 1.0 + 1e-12)

    def test_too_short(self):
        with pytest.raises(TooShort):
            acf([1.0, 2.0, 3.0], max_lag=3)   # needs max_lag+1 = 4 points

    def test_constant_series(self):
        with pytest.raises(ConstantSeries):
            acf([5.0] * 50, max_lag=3)

    def test_bad_max_lag(self):
        with pytest.raises(ValueError):
            acf([1.0, 2.0], max_lag=0)

    def test_max_lag_property(self):
        result = acf(np.random.default_rng(1).normal(0, 1, 30), max_lag=7)
        assert result.max_lag == 7
        assert isinstance(result, AcfResult)


def pairs_from_residuals(residuals):
    t0 = dt.datetime(2021, 6, 1, 0)
    return [
        AlignedPair(variable=WeatherVariable.TEMPERATURE, lead_day=1,
                    valid_time=t0 + dt.timedelta(hours=k),
                    observed_value=float(r), forecast_value=0.0)
        for k, r in enumerate(residuals)
    ]


class TestResidualWhiteness:
    def test_ar1_residuals_flagged(self):
        rng = np.random.default_rng(42)
        e = np.empty(500)
        e[0] = rng.standard_normal()
        for t in range(1, 500):
            e[t] = 0.8 * e[t - 1] + 0.6 * rng.standard_normal()
        result = residual_whiteness(pairs_from_residuals(e), max_lag=100)
        assert result.verdict == AUTOCORRELATED
        assert 0.7 <= result.acf.r(1) <= 0.9

    def test_white_residuals_pass(self):
        e = np.random.default_rng(11).standard_normal(1000)
        result = residual_whiteness(pairs_from_residuals(e), max_lag=100)
        assert result.verdict == WHITE
        assert result.acf.exceed_fraction <= 0.05

    def test_verdict_threshold_is_five_percent(self):
        # Craft fractions right at the boundary via monkey-free construction:
        # exceed_fraction > 0.05 -> autocorrelated, == 0.05 -> white.
        e = np.random.default_rng(9).standard_normal(1000)
        result = residual_whiteness(pairs_from_residuals(e), max_lag=100)
        expected = AUTOCORRELATED if result.acf.exceed_fraction > 0.05 else WHITE
        assert result.verdict == expected
