"""Command-line interface.

Seven subcommands wire the pipeline end to end::

    helios-audit audit        forecast-error tables, CIs, ACF diagnostics
    helios-audit select       correlation matrix and predictor selection
    helios-audit train        fit the peak-energy model, persist model.json
    helios-audit evaluate     lead-day energy-forecast error vs baseline
    helios-audit sensitivity  one-variable-perfect scenario curves
    helios-audit sweep        all 31 predictor subsets, ranked
    helios-audit synth        generate a synthetic dataset

Outputs are deterministic: rerunning a command with the same inputs and
--seed reproduces every JSON, CSV, and SVG byte for byte. Exit codes:
0 success, 2 unusable input, 3 computation failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import figures
from .diagnostics import DEFAULT_MAX_LAG, residual_whiteness
from .errors import (
    ComputationError,
    ConstantSeries,
    EmptySample,
    InputDataError,
    NoUsableRows,
    TooShort,
)
from .experiment import (
    ScenarioSpec,
    evaluate_lead_days,
    sensitivity,
    subset_sweep,
    train_model,
)
from .ingest import (
    LEAD_DAYS,
    WeatherVariable,
    align,
    extract_peaks,
    parse_energy_csv,
    parse_forecast_csv,
    parse_observed_csv,
)
from .mlp import model_to_dict
from .report import write_csv, write_json
from .resample import BootstrapConfig, error_stats
from .seeding import substream_seed
from .select import select_predictors
from .synth import SynthConfig, generate

SCHEMA_VERSION = 1
ENV_SEED = "HELIOS_SEED"


# ---------------------------------------------------------------------------
# argument plumbing


def _add_common(p: argparse.ArgumentParser, input_required: bool = True) -> None:
    p.add_argument("--in", dest="in_dir", required=input_required, default=".",
                   help="input directory containing the CSV files")
    p.add_argument("--out", dest="out_dir", required=True,
                   help="output directory for reports and figures")
    p.add_argument("--seed", type=int, default=None,
                   help=f"master random seed (default: ${ENV_SEED} or 0)")
    p.add_argument("--cycles", type=int, default=2500,
                   help="bootstrap resampling cycles (default 2500)")
    p.add_argument("--confidence", type=float, default=0.95,
                   help="bootstrap confidence level (default 0.95)")
    p.add_argument("--target-threshold", type=float, default=0.2,
                   help="minimum |r| against energy to keep a predictor (default 0.2)")
    p.add_argument("--collinearity-threshold", type=float, default=0.8,
                   help="maximum |r| between kept predictors (default 0.8)")
    p.add_argument("--hidden", type=int, default=3,
                   help="hidden-layer width of the energy model (default 3)")
    p.add_argument("--max-iter", type=int, default=200,
                   help="training iteration cap (default 200)")
    p.add_argument("--restarts", type=int, default=1,
                   help="independently seeded fits, keeping the best (default 1)")
    p.add_argument("--no-figures", action="store_true",
                   help="skip SVG figure emission")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helios-audit",
        description="Audit weather-forecast error and forecast solar PV generation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    specs = [
        ("audit", "quantify forecast error per variable and lead day", cmd_audit, True),
        ("select", "correlate weather with peak energy and pick predictors", cmd_select, True),
        ("train", "fit the peak-energy model and persist it", cmd_train, True),
        ("evaluate", "score energy forecasts for lead days 1-6", cmd_evaluate, True),
        ("sensitivity", "re-score with one input made perfect at a time", cmd_sensitivity, True),
        ("sweep", "train all 31 predictor subsets and rank them", cmd_sweep, True),
        ("synth", "generate a synthetic dataset with known ground truth", cmd_synth, False),
    ]
    for name, help_text, func, needs_input in specs:
        p = sub.add_parser(name, help=help_text)
        _add_common(p, input_required=needs_input)
        if name == "synth":
            p.add_argument("--days", type=int, default=365,
                           help="number of days to generate (default 365)")
        p.set_defaults(func=func)
    return parser


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputDataError(f"{ENV_SEED} must be an integer, got {env!r}") from None
    return 0


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _ci_dict(ci) -> dict:
    return {"point": ci.point, "lower": ci.lower, "upper": ci.upper}


def _finite_or_none(value: float):
    return float(value) if math.isfinite(value) else None


# ---------------------------------------------------------------------------
# audit


def cmd_audit(args) -> None:
    seed = _resolve_seed(args)
    in_dir = Path(args.in_dir)
    out = _out_dir(args)
    obs = parse_observed_csv(in_dir / "observed.csv")
    fc = parse_forecast_csv(in_dir / "forecast.csv")

    cells = []
    skipped_cells = []
    for var in WeatherVariable:
        for d in LEAD_DAYS:
            pairs, drops = align(obs, fc, var, d)
            if not pairs:
                skipped_cells.append({"variable": var.code, "lead_day": d, "drops": drops})
                continue
            cfg = BootstrapConfig(
                cycles=args.cycles,
                confidence=args.confidence,
                seed=substream_seed(seed, "audit", var.code, d),
            )
            cells.append(error_stats(pairs, cfg, drops=drops))
    if not cells:
        raise NoUsableRows(
            "observed.csv and forecast.csv share no usable (variable, lead day) pairs"
        )

    whiteness = []
    acf_skipped = []
    acf_rows = []
    for var in WeatherVariable:
        pairs, _ = align(obs, fc, var, 1)
        max_lag = min(DEFAULT_MAX_LAG, len(pairs) - 1)
        if max_lag < 1:
            acf_skipped.append({"variable": var.code,
                                "reason": f"only {len(pairs)} lead-1 pairs"})
            continue
        try:
            result = residual_whiteness(pairs, max_lag=max_lag)
        except (TooShort, ConstantSeries) as exc:
            acf_skipped.append({"variable": var.code, "reason": str(exc)})
            continue
        whiteness.append((var, result))
        for lag in range(1, result.acf.max_lag + 1):
            acf_rows.append((var.code, 1, lag, result.acf.r(lag), result.acf.bound))

    write_csv(out / "audit.csv",
              ["variable", "lead_day", "bias", "mae",
               "bias_ci_lower", "bias_ci_upper", "mae_ci_lower", "mae_ci_upper",
               "n_pairs", "drops"],
              ((s.variable.code, s.lead_day, s.bias, s.mae,
                s.bias_ci.lower, s.bias_ci.upper, s.mae_ci.lower, s.mae_ci.upper,
                s.n, s.drops) for s in cells))

    write_csv(out / "acf.csv",
              ["variable", "lead_day", "lag", "coefficient", "bound"],
              acf_rows)

    write_json(out / "audit.json", {
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "cycles": args.cycles,
        "confidence": args.confidence,
        "rejected_forecast_records": fc.rejected,
        "cells": [
            {
                "variable": s.variable.code,
                "lead_day": s.lead_day,
                "n": s.n,
                "drops": s.drops,
                "bias": _ci_dict(s.bias_ci),
                "mae": _ci_dict(s.mae_ci),
            }
            for s in cells
        ],
        "skipped_cells": skipped_cells,
        "whiteness": [
            {
                "variable": var.code,
                "lead_day": 1,
                "n": w.acf.n,
                "max_lag": w.acf.max_lag,
                "bound": w.acf.bound,
                "exceed_fraction": w.acf.exceed_fraction,
                "verdict": w.verdict,
            }
            for var, w in whiteness
        ],
        "acf_skipped": acf_skipped,
    })

    if args.no_figures:
        return
    by_var: dict[str, list] = {}
    for s in cells:
        by_var.setdefault(s.variable.code, []).append(s)
    for code, var_cells in by_var.items():
        var_cells.sort(key=lambda s: s.lead_day)
        (out / f"mae_{code.lower()}.svg").write_text(figures.bar_chart(
            title=f"{code} forecast MAE by lead day",
            ylabel="MAE",
            labels=[f"D{s.lead_day}" for s in var_cells],
            values=[s.mae for s in var_cells],
            lower=[s.mae_ci.lower for s in var_cells],
            upper=[s.mae_ci.upper for s in var_cells],
        ), encoding="utf-8", newline="\n")
    for var, w in whiteness:
        lags = list(range(1, w.acf.max_lag + 1))
        (out / f"acf_{var.code.lower()}.svg").write_text(figures.stem_chart(
            title=f"{var.code} lead-1 residual autocorrelation",
            ylabel="r(k)",
            lags=lags,
            values=[w.acf.r(k) for k in lags],
            bound=w.acf.bound,
        ), encoding="utf-8", newline="\n")


# ---------------------------------------------------------------------------
# select


def _load_peaks(in_dir: Path):
    obs = parse_observed_csv(in_dir / "observed.csv")
    fc = parse_forecast_csv(in_dir / "forecast.csv")
    energy = parse_energy_csv(in_dir / "energy.csv")
    return extract_peaks(energy, obs, fc)


def cmd_select(args) -> None:
    in_dir = Path(args.in_dir)
    out = _out_dir(args)
    peaks = _load_peaks(in_dir)
    if len(peaks) < 3:
        raise EmptySample(
            f"correlation analysis needs at least 3 peak-day rows, got {len(peaks)}"
        )
    report = select_predictors(
        peaks,
        target_threshold=args.target_threshold,
        collinearity_threshold=args.collinearity_threshold,
    )
    matrix = report.matrix

    write_csv(out / "corr.csv",
              ["label", *matrix.labels],
              ((matrix.labels[i], *(float(v) for v in matrix.values[i]))
               for i in range(len(matrix.labels))))

    write_json(out / "selection.json", {
        "schema_version": SCHEMA_VERSION,
        "n_rows": len(peaks),
        "target_threshold": args.target_threshold,
        "collinearity_threshold": args.collinearity_threshold,
        "selected": [v.code for v in report.selected],
        "excluded": [
            {"variable": e.variable.code, "reason": e.reason, "detail": e.detail}
            for e in report.excluded
        ],
        "target_correlations": {
            var.column: _finite_or_none(r)
            for var, r in report.target_correlations.items()
        },
        "matrix": {
            "labels": list(matrix.labels),
            "values": [[_finite_or_none(v) for v in row] for row in matrix.values],
            "counts": [[int(c) for c in row] for row in matrix.counts],
        },
    })

    scatter_specs = [
        ("scatter_energy_dew_point.csv", None, WeatherVariable.DEW_POINT),
        ("scatter_energy_wind_speed.csv", None, WeatherVariable.WIND_SPEED),
        ("scatter_energy_rel_humidity.csv", None, WeatherVariable.REL_HUMIDITY),
        ("scatter_dew_point_temperature.csv", WeatherVariable.DEW_POINT,
         WeatherVariable.TEMPERATURE),
    ]
    for filename, var_x, var_y in scatter_specs:
        if var_x is None:
            header = ["date", "energy_kwh", var_y.column]
            rows = [
                (row.date, row.peak_energy_kwh, row.observed[var_y])
                for row in peaks.rows
                if row.observed.get(var_y) is not None
            ]
        else:
            header = ["date", var_x.column, var_y.column]
            rows = [
                (row.date, row.observed[var_x], row.observed[var_y])
                for row in peaks.rows
                if row.observed.get(var_x) is not None
                and row.observed.get(var_y) is not None
            ]
        write_csv(out / filename, header, rows)


# ---------------------------------------------------------------------------
# train / evaluate / sensitivity / sweep


def _select_and_train(args, peaks, seed: int):
    report = select_predictors(
        peaks,
        target_threshold=args.target_threshold,
        collinearity_threshold=args.collinearity_threshold,
    )
    if not report.selected:
        raise NoUsableRows("predictor selection kept no variables; cannot train")
    trained = train_model(
        peaks,
        report.selected,
        seed=substream_seed(seed, "train"),
        hidden=args.hidden,
        max_iter=args.max_iter,
        restarts=args.restarts,
    )
    return report, trained


def cmd_train(args) -> None:
    seed = _resolve_seed(args)
    out = _out_dir(args)
    peaks = _load_peaks(Path(args.in_dir))
    if len(peaks) < 3:
        raise EmptySample(f"training needs at least 3 peak-day rows, got {len(peaks)}")
    report, trained = _select_and_train(args, peaks, seed)

    doc = model_to_dict(
        trained.estimator,
        inputs=[v.column for v in trained.inputs],
        training={
            "restarts": trained.restarts,
            "rows_used": int(trained.usable_rows.size),
            "rows_skipped": trained.rows_skipped,
            "train_rows": int(trained.train_positions.size),
            "validation_rows": int(trained.validation_positions.size),
            "validation_mse": trained.validation_mse,
            "validation_mape": trained.validation_mape,
        },
    )
    write_json(out / "model.json", doc)


def cmd_evaluate(args) -> None:
    seed = _resolve_seed(args)
    out = _out_dir(args)
    peaks = _load_peaks(Path(args.in_dir))
    if len(peaks) < 3:
        raise EmptySample(f"evaluation needs at least 3 peak-day rows, got {len(peaks)}")
    _, trained = _select_and_train(args, peaks, seed)
    evaluation = evaluate_lead_days(trained, peaks)

    rows = [
        ("observed", None, evaluation.baseline.n, evaluation.baseline.skipped,
         evaluation.baseline.mape, evaluation.baseline.mae),
        ("observed_validation", None, evaluation.baseline_validation.n,
         evaluation.baseline_validation.skipped,
         evaluation.baseline_validation.mape, evaluation.baseline_validation.mae),
    ]
    for d in LEAD_DAYS:
        m = evaluation.days[d]
        rows.append(("forecast", d, m.n, m.skipped, m.mape, m.mae))
    write_csv(out / "leadday.csv",
              ["input", "lead_day", "n", "skipped", "mape", "mae"], rows)

    if not args.no_figures:
        labels = ["observed"] + [f"D{d}" for d in LEAD_DAYS]
        values = [evaluation.baseline.mape] + [evaluation.days[d].mape for d in LEAD_DAYS]
        colors = [figures.PALETTE[4]] + [figures.PALETTE[0]] * len(LEAD_DAYS)
        (out / "leadday.svg").write_text(figures.bar_chart(
            title="Peak-energy forecast MAPE by input",
            ylabel="MAPE (%)",
            labels=labels,
            values=values,
            colors=colors,
        ), encoding="utf-8", newline="\n")


def cmd_sensitivity(args) -> None:
    seed = _resolve_seed(args)
    out = _out_dir(args)
    peaks = _load_peaks(Path(args.in_dir))
    if len(peaks) < 3:
        raise EmptySample(f"sensitivity needs at least 3 peak-day rows, got {len(peaks)}")
    _, trained = _select_and_train(args, peaks, seed)
    evaluation = evaluate_lead_days(trained, peaks)
    scenarios = [
        (var, sensitivity(trained, peaks, ScenarioSpec(perfect_variable=var)))
        for var in trained.inputs
    ]

    rows = []
    for d in LEAD_DAYS:
        m = evaluation.days[d]
        rows.append(("forecast_baseline", d, m.n, m.skipped, m.mape, m.mae))
    for var, curve in scenarios:
        for d in LEAD_DAYS:
            m = curve[d]
            rows.append((f"perfect_{var.column}", d, m.n, m.skipped, m.mape, m.mae))
    write_csv(out / "sensitivity.csv",
              ["scenario", "lead_day", "n", "skipped", "mape", "mae"], rows)

    if not args.no_figures:
        series = [("all forecasts",
                   [evaluation.days[d].mape for d in LEAD_DAYS])]
        for var, curve in scenarios:
            series.append((f"perfect {var.column}",
                           [curve[d].mape for d in LEAD_DAYS]))
        (out / "sensitivity.svg").write_text(figures.line_chart(
            title="Scenario MAPE by lead day",
            ylabel="MAPE (%)",
            x_values=list(LEAD_DAYS),
            series=series,
        ), encoding="utf-8", newline="\n")


def cmd_sweep(args) -> None:
    seed = _resolve_seed(args)
    out = _out_dir(args)
    peaks = _load_peaks(Path(args.in_dir))
    if len(peaks) < 3:
        raise EmptySample(f"the sweep needs at least 3 peak-day rows, got {len(peaks)}")
    result = subset_sweep(
        peaks,
        seed=substream_seed(seed, "sweep"),
        hidden=args.hidden,
        max_iter=args.max_iter,
    )
    write_csv(out / "sweep.csv",
              ["rank", "variables", "mask", "size", "validation_mape", "validation_mse"],
              ((rank, "+".join(v.code for v in entry.variables), entry.mask,
                len(entry.variables), entry.validation_mape, entry.validation_mse)
               for rank, entry in enumerate(result.ranked(), start=1)))


# ---------------------------------------------------------------------------
# synth


def cmd_synth(args) -> None:
    seed = _resolve_seed(args)
    out = _out_dir(args)
    cfg = SynthConfig(days=args.days, seed=seed)
    generate(cfg, out)

    records = parse_energy_csv(out / "energy.csv", capacity=cfg.capacity)
    by_hour: dict[int, list[float]] = {h: [] for h in range(24)}
    for rec in records:
        by_hour[rec.timestamp.hour].append(rec.energy_kwh)
    means = [float(np.mean(by_hour[h])) if by_hour[h] else 0.0 for h in range(24)]
    write_csv(out / "profile.csv",
              ["hour", "mean_energy_kwh"],
              ((h, means[h]) for h in range(24)))

    if not args.no_figures:
        (out / "profile.svg").write_text(figures.line_chart(
            title="Mean daily generation profile",
            ylabel="energy (kWh)",
            x_values=list(range(24)),
            series=[("mean energy", means)],
            x_label_every=3,
        ), encoding="utf-8", newline="\n")


# ---------------------------------------------------------------------------
# entry point


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (InputDataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ComputationError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
