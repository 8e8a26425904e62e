"""Ingestion of observed-weather, forecast-weather, and PV-energy CSV files.

File formats (UTF-8, LF, '.' decimal point, timestamps ``YYYY-MM-DDTHH:00``
in local standard time):

* ``observed.csv``  header ``timestamp,sky_cover,dew_point,rel_humidity,temperature,wind_speed``;
  sky_cover is a category string (Clear .. Cloudy).
* ``forecast.csv``  header ``issue_time,valid_time,sky_cover_pct,dew_point,rel_humidity,temperature,wind_speed``.
* ``energy.csv``    header ``timestamp,energy_kwh``.

Missing numeric cells are empty fields. Sky cover is normalized to the five
percent categories {0, 25, 50, 75, 100} before any comparison: observed
strings through the category table, forecast percentages through the
half-open bins [0,12.5) -> 0, [12.5,37.5) -> 25, [37.5,62.5) -> 50,
[62.5,87.5) -> 75, [87.5,100] -> 100.
"""

from __future__ import annotations

import csv
import datetime as dt
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    NoGeneration,
    OutOfRange,
    ParseError,
    UnknownCategory,
)

__all__ = [
    "WeatherVariable",
    "ObservationRecord",
    "ObservationSeries",
    "ForecastRecord",
    "ForecastSeries",
    "EnergyRecord",
    "AlignedPair",
    "PeakRow",
    "PeakDataset",
    "LEAD_DAYS",
    "DEFAULT_CAPACITY_KWH",
    "categorize_observed_sky",
    "categorize_forecast_sky",
    "sky_category_name",
    "parse_timestamp",
    "format_timestamp",
    "parse_observed_csv",
    "parse_forecast_csv",
    "parse_energy_csv",
    "align",
    "extract_peaks",
]

LEAD_DAYS = range(1, 7)
DEFAULT_CAPACITY_KWH = 120.0

OBSERVED_HEADER = ["timestamp", "sky_cover", "dew_point", "rel_humidity", "temperature", "wind_speed"]
FORECAST_HEADER = ["issue_time", "valid_time", "sky_cover_pct", "dew_point", "rel_humidity", "temperature", "wind_speed"]
ENERGY_HEADER = ["timestamp", "energy_kwh"]


class WeatherVariable(Enum):
    """The five variables common to observed and forecast feeds.

    Definition order is the canonical order used for tie-breaking and
    report columns.
    """

    SKY_COVER = ("SC", "sky_cover")
    DEW_POINT = ("DP", "dew_point")
    REL_HUMIDITY = ("RH", "rel_humidity")
    TEMPERATURE = ("T", "temperature")
    WIND_SPEED = ("W", "wind_speed")

    def __init__(self, code: str, column: str):
        self.code = code
        self.column = column

    @classmethod
    def from_code(cls, code: str) -> "WeatherVariable":
        for var in cls:
            if var.code == code:
                return var
        raise KeyError(f"unknown weather variable code {code!r}")


_SKY_CATEGORY_PERCENT = {
    "clear": 0.0,
    "mostly clear": 25.0,
    "partly cloudy": 50.0,
    "mostly cloudy": 75.0,
    "cloudy": 100.0,
}

_SKY_CATEGORY_NAME = {
    0.0: "Clear",
    25.0: "Mostly Clear",
    50.0: "Partly Cloudy",
    75.0: "Mostly Cloudy",
    100.0: "Cloudy",
}

# Lower edges of the forecast sky-cover bins, paired with their category value.
_SKY_BIN_EDGES = (12.5, 37.5, 62.5, 87.5)
_SKY_BIN_VALUES = (0.0, 25.0, 50.0, 75.0, 100.0)


def categorize_observed_sky(category: str) -> float:
    """Map a sky-condition string to its percent category.

    Matching is case-insensitive and ignores surrounding whitespace.
    """
    key = category.strip().lower()
    try:
        return _SKY_CATEGORY_PERCENT[key]
    except KeyError:
        raise UnknownCategory(f"unknown sky-cover category {category!r}") from None


def categorize_forecast_sky(pct: float) -> float:
    """Bin a forecast sky-cover percentage into the five percent categories."""
    if not 0.0 <= pct <= 100.0:
        raise OutOfRange(f"sky-cover percent must lie in [0, 100], got {pct}")
    for edge, value in zip(_SKY_BIN_EDGES, _SKY_BIN_VALUES):
        if pct < edge:
            return value
    return _SKY_BIN_VALUES[-1]


def sky_category_name(percent_category: float) -> str:
    """Inverse of :func:`categorize_observed_sky` for writing observed files."""
    try:
        return _SKY_CATEGORY_NAME[float(percent_category)]
    except KeyError:
        raise UnknownCategory(f"{percent_category!r} is not a percent category") from None


def parse_timestamp(text: str) -> dt.datetime:
    """Parse ``YYYY-MM-DDTHH:MM`` with MM == 00 (local hour, no zone)."""
    try:
        ts = dt.datetime(int(text[0:4]), int(text[5:7]), int(text[8:10]),
                         int(text[11:13]), int(text[14:16]))
    except (ValueError, IndexError):
        raise ValueError(f"bad timestamp {text!r}, expected YYYY-MM-DDTHH:00") from None
    if len(text) != 16 or text[4] != "-" or text[7] != "-" or text[10] != "T" or text[13] != ":":
        raise ValueError(f"bad timestamp {text!r}, expected YYYY-MM-DDTHH:00")
    if ts.minute != 0:
        raise ValueError(f"timestamp {text!r} is not on an hour boundary")
    return ts


def format_timestamp(ts: dt.datetime) -> str:
    return ts.strftime("%Y-%m-%dT%H:%M")


@dataclass(frozen=True)
class ObservationRecord:
    timestamp: dt.datetime
    sky_cover: str | None = None
    dew_point: float | None = None
    rel_humidity: float | None = None
    temperature: float | None = None
    wind_speed: float | None = None

    def weather_value(self, variable: WeatherVariable) -> float | None:
        """Numeric value for ``variable``; sky cover comes back categorized."""
        if variable is WeatherVariable.SKY_COVER:
            if self.sky_cover is None:
                return None
            return categorize_observed_sky(self.sky_cover)
        return getattr(self, variable.column)


@dataclass(frozen=True)
class ForecastRecord:
    issue_time: dt.datetime
    valid_time: dt.datetime
    sky_cover_pct: float | None = None
    dew_point: float | None = None
    rel_humidity: float | None = None
    temperature: float | None = None
    wind_speed: float | None = None

    @property
    def lead_day(self) -> int:
        """1 + full 24 h periods between issue and valid time."""
        delta = self.valid_time - self.issue_time
        return int(delta.total_seconds() // 86400) + 1

    def weather_value(self, variable: WeatherVariable) -> float | None:
        if variable is WeatherVariable.SKY_COVER:
            if self.sky_cover_pct is None:
                return None
            return categorize_forecast_sky(self.sky_cover_pct)
        return getattr(self, variable.column)


@dataclass(frozen=True)
class EnergyRecord:
    timestamp: dt.datetime
    energy_kwh: float


@dataclass(frozen=True)
class AlignedPair:
    """One (observed, forecast) value pair; sky cover already categorized."""

    variable: WeatherVariable
    lead_day: int
    valid_time: dt.datetime
    observed_value: float
    forecast_value: float


class ObservationSeries:
    """Hourly observed records keyed by timestamp."""

    def __init__(self, records: Iterable[ObservationRecord]):
        self._by_time: dict[dt.datetime, ObservationRecord] = {}
        for rec in records:
            self._by_time[rec.timestamp] = rec

    def get(self, timestamp: dt.datetime) -> ObservationRecord | None:
        return self._by_time.get(timestamp)

    def timestamps(self) -> list[dt.datetime]:
        return sorted(self._by_time)

    def __len__(self) -> int:
        return len(self._by_time)


class ForecastSeries:
    """Forecast records indexed by (valid time, lead day).

    When several issuances map to the same slot, the most recent
    issue time wins. ``rejected`` counts records whose lead day fell
    outside 1..6 (or whose valid time did not follow the issue time)
    and were rejected at parse time.
    """

    def __init__(self, records: Iterable[ForecastRecord], rejected: int = 0):
        self._by_slot: dict[tuple[dt.datetime, int], ForecastRecord] = {}
        self.rejected = rejected
        count = 0
        for rec in records:
            count += 1
            slot = (rec.valid_time, rec.lead_day)
            held = self._by_slot.get(slot)
            if held is None or rec.issue_time > held.issue_time:
                self._by_slot[slot] = rec
        self._count = count

    def best(self, valid_time: dt.datetime, lead_day: int) -> ForecastRecord | None:
        return self._by_slot.get((valid_time, lead_day))

    def at_lead(self, lead_day: int) -> list[ForecastRecord]:
        records = [rec for (vt, d), rec in self._by_slot.items() if d == lead_day]
        records.sort(key=lambda rec: rec.valid_time)
        return records

    def __len__(self) -> int:
        return self._count


def _read_rows(path: Path, expected_header: list[str]):
    """Yield (line_number, row) for a CSV file after validating the header."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(str(path), 1, "file is empty") from None
        if header != expected_header:
            raise ParseError(
                str(path), 1,
                f"expected header {','.join(expected_header)!r}, got {','.join(header)!r}",
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(expected_header):
                raise ParseError(
                    str(path), lineno,
                    f"expected {len(expected_header)} fields, got {len(row)}",
                )
            yield lineno, row


def _parse_optional_float(text: str, path: Path, lineno: int, column: str) -> float | None:
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        raise ParseError(str(path), lineno, f"bad numeric value {text!r} in {column}") from None


def _parse_time(text: str, path: Path, lineno: int, column: str) -> dt.datetime:
    try:
        return parse_timestamp(text)
    except ValueError as exc:
        raise ParseError(str(path), lineno, f"{column}: {exc}") from None


def parse_observed_csv(path: str | Path) -> ObservationSeries:
    path = Path(path)
    records = []
    seen: set[dt.datetime] = set()
    for lineno, row in _read_rows(path, OBSERVED_HEADER):
        ts = _parse_time(row[0], path, lineno, "timestamp")
        if ts in seen:
            raise ParseError(str(path), lineno, f"duplicate timestamp {row[0]}")
        seen.add(ts)
        sky = row[1].strip() or None
        if sky is not None:
            try:
                categorize_observed_sky(sky)
            except UnknownCategory as exc:
                raise ParseError(str(path), lineno, str(exc)) from None
        rh = _parse_optional_float(row[3], path, lineno, "rel_humidity")
        if rh is not None and not 0.0 <= rh <= 100.0:
            raise ParseError(str(path), lineno, f"rel_humidity {rh} outside [0, 100]")
        records.append(ObservationRecord(
            timestamp=ts,
            sky_cover=sky,
            dew_point=_parse_optional_float(row[2], path, lineno, "dew_point"),
            rel_humidity=rh,
            temperature=_parse_optional_float(row[4], path, lineno, "temperature"),
            wind_speed=_parse_optional_float(row[5], path, lineno, "wind_speed"),
        ))
    return ObservationSeries(records)


def parse_forecast_csv(path: str | Path) -> ForecastSeries:
    path = Path(path)
    records = []
    rejected = 0
    seen: set[tuple[dt.datetime, dt.datetime]] = set()
    for lineno, row in _read_rows(path, FORECAST_HEADER):
        issue = _parse_time(row[0], path, lineno, "issue_time")
        valid = _parse_time(row[1], path, lineno, "valid_time")
        key = (issue, valid)
        if key in seen:
            raise ParseError(str(path), lineno, f"duplicate (issue_time, valid_time) {row[0]},{row[1]}")
        seen.add(key)
        if valid <= issue:
            rejected += 1
            continue
        lead = int((valid - issue).total_seconds() // 86400) + 1
        if lead not in LEAD_DAYS:
            rejected += 1
            continue
        sky = _parse_optional_float(row[2], path, lineno, "sky_cover_pct")
        if sky is not None and not 0.0 <= sky <= 100.0:
            raise ParseError(str(path), lineno, f"sky_cover_pct {sky} outside [0, 100]")
        records.append(ForecastRecord(
            issue_time=issue,
            valid_time=valid,
            sky_cover_pct=sky,
            dew_point=_parse_optional_float(row[3], path, lineno, "dew_point"),
            rel_humidity=_parse_optional_float(row[4], path, lineno, "rel_humidity"),
            temperature=_parse_optional_float(row[5], path, lineno, "temperature"),
            wind_speed=_parse_optional_float(row[6], path, lineno, "wind_speed"),
        ))
    return ForecastSeries(records, rejected=rejected)


def parse_energy_csv(path: str | Path, capacity: float = DEFAULT_CAPACITY_KWH) -> list[EnergyRecord]:
    path = Path(path)
    records = []
    seen: set[dt.datetime] = set()
    for lineno, row in _read_rows(path, ENERGY_HEADER):
        ts = _parse_time(row[0], path, lineno, "timestamp")
        if ts in seen:
            raise ParseError(str(path), lineno, f"duplicate timestamp {row[0]}")
        seen.add(ts)
        value = _parse_optional_float(row[1], path, lineno, "energy_kwh")
        if value is None:
            raise ParseError(str(path), lineno, "energy_kwh is required")
        if value < 0.0:
            raise ParseError(str(path), lineno, f"energy_kwh {value} is negative")
        if value > capacity:
            warnings.warn(
                f"{path}:{lineno}: energy {value} kWh exceeds panel capacity {capacity} kWh",
                stacklevel=2,
            )
        records.append(EnergyRecord(timestamp=ts, energy_kwh=value))
    return records


def align(
    obs: ObservationSeries,
    fc: ForecastSeries,
    variable: WeatherVariable,
    lead_day: int,
) -> tuple[list[AlignedPair], int]:
    """Pair forecast values at ``lead_day`` with observations for ``variable``.

    One pair per forecast slot where both sides carry a value; slots where
    either side is missing are counted as drops. Pairs come back sorted by
    valid time.
    """
    if lead_day not in LEAD_DAYS:
        raise ValueError(f"lead_day must lie in 1..6, got {lead_day}")
    pairs: list[AlignedPair] = []
    drops = 0
    for rec in fc.at_lead(lead_day):
        fval = rec.weather_value(variable)
        obs_rec = obs.get(rec.valid_time)
        oval = obs_rec.weather_value(variable) if obs_rec is not None else None
        if fval is None or oval is None:
            drops += 1
            continue
        pairs.append(AlignedPair(
            variable=variable,
            lead_day=lead_day,
            valid_time=rec.valid_time,
            observed_value=oval,
            forecast_value=fval,
        ))
    return pairs, drops


@dataclass(frozen=True)
class PeakRow:
    """One calendar day: peak energy plus same-hour weather vectors."""

    date: dt.date
    peak_hour: int
    peak_energy_kwh: float
    observed: dict[WeatherVariable, float | None]
    forecast: dict[int, dict[WeatherVariable, float | None]] = field(default_factory=dict)


class PeakDataset:
    """Daily-peak rows used for predictor selection and model training."""

    def __init__(self, rows: Sequence[PeakRow]):
        self.rows = list(rows)

    def __len__(self) -> int:
        return len(self.rows)

    def energy(self) -> np.ndarray:
        return np.array([row.peak_energy_kwh for row in self.rows], dtype=np.float64)

    def observed_matrix(self, variables: Sequence[WeatherVariable]) -> np.ndarray:
        """(n_rows, n_variables) observed values at peak hour; missing -> NaN."""
        out = np.full((len(self.rows), len(variables)), np.nan)
        for i, row in enumerate(self.rows):
            for j, var in enumerate(variables):
                value = row.observed.get(var)
                if value is not None:
                    out[i, j] = value
        return out

    def forecast_matrix(self, variables: Sequence[WeatherVariable], lead_day: int) -> np.ndarray:
        """(n_rows, n_variables) lead-day forecast values; missing -> NaN."""
        out = np.full((len(self.rows), len(variables)), np.nan)
        for i, row in enumerate(self.rows):
            vector = row.forecast.get(lead_day)
            if vector is None:
                continue
            for j, var in enumerate(variables):
                value = vector.get(var)
                if value is not None:
                    out[i, j] = value
        return out


def extract_peaks(
    energy: Sequence[EnergyRecord],
    obs: ObservationSeries,
    fc: ForecastSeries,
) -> PeakDataset:
    """Build the daily-peak dataset: one row per day with nonzero generation.

    The peak hour is the argmax of hourly energy (earliest hour on ties);
    observed and per-lead-day forecast weather vectors are looked up at
    that hour. Days whose energy is zero throughout are excluded.
    """
    by_date: dict[dt.date, list[EnergyRecord]] = {}
    for rec in energy:
        by_date.setdefault(rec.timestamp.date(), []).append(rec)

    rows: list[PeakRow] = []
    for date in sorted(by_date):
        day = sorted(by_date[date], key=lambda rec: rec.timestamp)
        peak = max(day, key=lambda rec: rec.energy_kwh)  # max() keeps the earliest tie
        if peak.energy_kwh <= 0.0:
            continue
        ts = peak.timestamp
        obs_rec = obs.get(ts)
        observed = {
            var: (obs_rec.weather_value(var) if obs_rec is not None else None)
            for var in WeatherVariable
        }
        forecast: dict[int, dict[WeatherVariable, float | None]] = {}
        for lead in LEAD_DAYS:
            fc_rec = fc.best(ts, lead)
            forecast[lead] = {
                var: (fc_rec.weather_value(var) if fc_rec is not None else None)
                for var in WeatherVariable
            }
        rows.append(PeakRow(
            date=date,
            peak_hour=ts.hour,
            peak_energy_kwh=peak.energy_kwh,
            observed=observed,
            forecast=forecast,
        ))
    if not rows:
        raise NoGeneration("every day in the energy series has zero generation")
    return PeakDataset(rows)
