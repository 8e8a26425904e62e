"""Synthetic observed/forecast/energy dataset generator with known ground truth.

The generator plants every effect the analysis pipeline is supposed to
find, so end-to-end tests can assert recovery instead of fixtures:

* forecast error: forecast = observed - b_v + sigma_v(d) * AR(1) noise,
  so the audited Bias of variable v converges to the planted ``b_v``
  (negative for sky cover, dew point, humidity, temperature; positive for
  wind) and MAE grows with lead day because sigma_v(d) does;
* residual autocorrelation: the AR(1) coefficient phi (default 0.8) makes
  lead-day residual series autocorrelated, so the ACF diagnostic fires;
* energy: daily peak amplitude is a linear function of the standardized
  sky-cover category, humidity, and temperature drivers (humidity carries
  the largest coefficient), plus Gaussian noise. Dew point is built
  0.85-correlated with temperature and the wind driver is independent of
  energy, so predictor selection should keep {SC, RH, T}, drop DP as
  collinear and W as uninformative;
* shape: energy follows a sin^2 daylight profile, zero at night, peaking
  at noon, bounded away from zero and from the panel capacity.

A day's weather is driven by per-day latent normals (with a mild diurnal
cycle added to the thermodynamic variables); all randomness flows from
named substreams of the config seed.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .ingest import (
    ENERGY_HEADER,
    FORECAST_HEADER,
    OBSERVED_HEADER,
    WeatherVariable,
    categorize_forecast_sky,
    sky_category_name,
)
from .report import write_csv, write_json
from .seeding import spawn_rng

__all__ = ["SynthConfig", "GroundTruth", "generate", "unit_ar1"]

VARIABLE_CODES = tuple(v.code for v in WeatherVariable)

DEFAULT_BIAS = {"SC": -6.0, "DP": -2.5, "RH": -2.0, "T": -2.0, "W": 1.5}
DEFAULT_SIGMA0 = {"SC": 8.0, "DP": 2.0, "RH": 6.0, "T": 1.8, "W": 1.2}
DEFAULT_SIGMA_STEP = {"SC": 3.0, "DP": 0.7, "RH": 2.0, "T": 0.6, "W": 0.4}

ENERGY_BASE = 60.0
ENERGY_SCALE = 18.0
PEAK_HOUR = 12

# standard deviation of the categorized uniform sky-cover percent:
# categories {0,25,50,75,100} hit with mass {.125,.25,.25,.25,.125}
_SKY_CATEGORY_SD = math.sqrt(937.5)


@dataclass(frozen=True)
class SynthConfig:
    """Knobs of the generator; defaults reproduce the planted-signal design."""

    days: int = 365
    seed: int = 0
    start: dt.date = dt.date(2021, 1, 1)
    capacity: float = 120.0
    phi: float = 0.8
    bias: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_BIAS))
    sigma0: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_SIGMA0))
    sigma_step: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_SIGMA_STEP))
    beta_sky: float = -0.40
    beta_humidity: float = -0.60
    beta_temperature: float = 0.45
    dp_t_corr: float = 0.85

    def __post_init__(self):
        if self.days < 30:
            raise ValueError(f"days must be >= 30, got {self.days}")
        if not abs(self.phi) < 1.0:
            raise ValueError(f"|phi| must be < 1, got {self.phi}")
        if self.capacity <= 0.0:
            raise ValueError("capacity must be positive")
        for table, name, low in (
            (self.bias, "bias", None),
            (self.sigma0, "sigma0", 0.0),
            (self.sigma_step, "sigma_step", 0.0),
        ):
            if set(table) != set(VARIABLE_CODES):
                raise ValueError(f"{name} must have exactly the keys {VARIABLE_CODES}")
            if low is not None and any(v < low for v in table.values()):
                raise ValueError(f"{name} entries must be >= {low}")
        if self.beta_sky**2 + self.beta_humidity**2 + self.beta_temperature**2 >= 1.0:
            raise ValueError("energy coefficients leave no room for noise (sum of squares >= 1)")
        if not -1.0 <= self.dp_t_corr <= 1.0:
            raise ValueError("dp_t_corr must lie in [-1, 1]")

    def sigma(self, code: str, lead_day: int) -> float:
        return self.sigma0[code] + self.sigma_step[code] * (lead_day - 1)

    @property
    def noise_sd(self) -> float:
        return math.sqrt(
            1.0 - self.beta_sky**2 - self.beta_humidity**2 - self.beta_temperature**2
        )


@dataclass(frozen=True)
class GroundTruth:
    """What the generator planted, for tests and downstream comparison."""

    seed: int
    days: int
    start: dt.date
    capacity: float
    dominant_variable: str
    informative_variables: tuple[str, ...]
    planted_bias: dict[str, float]
    noise_sigma: dict[str, list[float]]
    phi: float
    dp_t_corr: float
    energy_base: float
    energy_scale: float
    energy_clip: tuple[float, float]
    betas: dict[str, float]
    noise_sd: float
    peak_hour: int

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "seed": self.seed,
            "days": self.days,
            "start": self.start.isoformat(),
            "capacity": self.capacity,
            "dominant_variable": self.dominant_variable,
            "informative_variables": list(self.informative_variables),
            "planted_bias": dict(self.planted_bias),
            "noise_sigma": {k: list(v) for k, v in self.noise_sigma.items()},
            "phi": self.phi,
            "dp_t_corr": self.dp_t_corr,
            "energy": {
                "base": self.energy_base,
                "scale": self.energy_scale,
                "clip_min": self.energy_clip[0],
                "clip_max": self.energy_clip[1],
                "beta_sky": self.betas["SC"],
                "beta_humidity": self.betas["RH"],
                "beta_temperature": self.betas["T"],
                "noise_sd": self.noise_sd,
            },
            "peak_hour": self.peak_hour,
        }


def unit_ar1(n: int, phi: float, rng: np.random.Generator) -> np.ndarray:
    """Stationary AR(1) series with unit marginal variance and lag-1
    correlation phi: e[t] = phi*e[t-1] + sqrt(1-phi^2)*w[t]."""
    w = rng.standard_normal(n)
    e = np.empty(n)
    if n == 0:
        return e
    e[0] = w[0]
    c = math.sqrt(1.0 - phi * phi)
    for t in range(1, n):
        e[t] = phi * e[t - 1] + c * w[t]
    return e


def _normal_cdf(z: np.ndarray) -> np.ndarray:
    return np.array([0.5 * (1.0 + math.erf(v / math.sqrt(2.0))) for v in z])


def generate(cfg: SynthConfig, out_dir: str | Path) -> GroundTruth:
    """Write observed.csv, forecast.csv, energy.csv, and ground_truth.json.

    Forecasts are issued twice per day (00:00 and 12:00) for valid times
    1..143 hours ahead, clipped to the generated horizon so alignment has
    zero drops. All issuances covering the same (valid time, lead day)
    slot carry identical values.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    days, hours = cfg.days, cfg.days * 24
    day_idx = np.repeat(np.arange(days), 24)
    hour = np.tile(np.arange(24), days)

    # per-day latent drivers
    zeta_sky = spawn_rng(cfg.seed, "synth", "sky").standard_normal(days)
    u_temp = spawn_rng(cfg.seed, "synth", "temperature").standard_normal(days)
    u_dp_ind = spawn_rng(cfg.seed, "synth", "dew-point").standard_normal(days)
    u_hum = spawn_rng(cfg.seed, "synth", "humidity").standard_normal(days)
    u_wind = spawn_rng(cfg.seed, "synth", "wind").standard_normal(days)
    eps = spawn_rng(cfg.seed, "synth", "energy").standard_normal(days)
    u_dp = cfg.dp_t_corr * u_temp + math.sqrt(1.0 - cfg.dp_t_corr**2) * u_dp_ind

    # hourly observed fields (rounded exactly as written)
    diurnal = np.cos(2.0 * np.pi * (hour - 14) / 24.0)
    obs = {
        "T": np.round(10.0 + 8.0 * u_temp[day_idx] + 4.0 * diurnal, 2),
        "DP": np.round(4.0 + 6.0 * u_dp[day_idx] + 2.0 * diurnal, 2),
        "RH": np.round(np.clip(60.0 + 14.0 * u_hum[day_idx] - 3.0 * diurnal, 0.0, 100.0), 2),
        "W": np.round(np.clip(12.0 + 5.0 * u_wind[day_idx], 0.5, None), 2),
    }
    sky_pct_day = np.round(100.0 * _normal_cdf(zeta_sky), 2)
    obs["SC"] = sky_pct_day[day_idx]
    sky_cat_day = np.array([categorize_forecast_sky(p) for p in sky_pct_day])

    # daily peak amplitude from the planted energy function
    z_cat = (sky_cat_day - 50.0) / _SKY_CATEGORY_SD
    signal = (
        cfg.beta_sky * z_cat
        + cfg.beta_humidity * u_hum
        + cfg.beta_temperature * u_temp
        + cfg.noise_sd * eps
    )
    amp_lo, amp_hi = 0.10 * cfg.capacity, 0.95 * cfg.capacity
    amplitude = np.clip(ENERGY_BASE + ENERGY_SCALE * signal, amp_lo, amp_hi)
    profile = np.where(
        (hour >= 6) & (hour <= 18),
        np.sin(np.pi * (hour - 6) / 12.0) ** 2,
        0.0,
    )
    energy = np.round(amplitude[day_idx] * profile, 3)

    # forecast fields per (variable, lead day): planted bias + AR(1) noise
    fc: dict[str, dict[int, np.ndarray]] = {}
    for code in VARIABLE_CODES:
        fc[code] = {}
        base = obs[code]
        for d in range(1, 7):
            noise = unit_ar1(hours, cfg.phi, spawn_rng(cfg.seed, "synth", "fc", code, d))
            raw = base - cfg.bias[code] + cfg.sigma(code, d) * noise
            if code in ("SC", "RH"):
                raw = np.clip(raw, 0.0, 100.0)
            elif code == "W":
                raw = np.clip(raw, 0.0, None)
            fc[code][d] = np.round(raw, 2)

    start = dt.datetime.combine(cfg.start, dt.time(0))
    stamp = [(start + dt.timedelta(hours=int(h))).strftime("%Y-%m-%dT%H:%M")
             for h in range(hours)]

    write_csv(out / "observed.csv", OBSERVED_HEADER, (
        (
            stamp[t],
            sky_category_name(sky_cat_day[day_idx[t]]),
            obs["DP"][t],
            obs["RH"][t],
            obs["T"][t],
            obs["W"][t],
        )
        for t in range(hours)
    ))

    write_csv(out / "energy.csv", ENERGY_HEADER, (
        (stamp[t], energy[t]) for t in range(hours)
    ))

    def forecast_rows():
        for j in range(days):
            for issue_hour in (0, 12):
                issue_t = 24 * j + issue_hour
                for offset in range(1, 144):
                    valid_t = issue_t + offset
                    if valid_t >= hours:
                        break
                    d = offset // 24 + 1
                    yield (
                        stamp[issue_t],
                        stamp[valid_t],
                        fc["SC"][d][valid_t],
                        fc["DP"][d][valid_t],
                        fc["RH"][d][valid_t],
                        fc["T"][d][valid_t],
                        fc["W"][d][valid_t],
                    )

    write_csv(out / "forecast.csv", FORECAST_HEADER, forecast_rows())

    truth = GroundTruth(
        seed=cfg.seed,
        days=cfg.days,
        start=cfg.start,
        capacity=cfg.capacity,
        dominant_variable=WeatherVariable.REL_HUMIDITY.column,
        informative_variables=(
            WeatherVariable.SKY_COVER.column,
            WeatherVariable.REL_HUMIDITY.column,
            WeatherVariable.TEMPERATURE.column,
        ),
        planted_bias={c: float(cfg.bias[c]) for c in VARIABLE_CODES},
        noise_sigma={c: [cfg.sigma(c, d) for d in range(1, 7)] for c in VARIABLE_CODES},
        phi=cfg.phi,
        dp_t_corr=cfg.dp_t_corr,
        energy_base=ENERGY_BASE,
        energy_scale=ENERGY_SCALE,
        energy_clip=(amp_lo, amp_hi),
        betas={"SC": cfg.beta_sky, "RH": cfg.beta_humidity, "T": cfg.beta_temperature},
        noise_sd=cfg.noise_sd,
        peak_hour=PEAK_HOUR,
    )
    write_json(out / "ground_truth.json", truth.to_dict())
    return truth
