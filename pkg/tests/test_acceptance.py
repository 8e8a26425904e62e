"""Release acceptance checks.

Each test verifies one numbered release criterion end to end and prints a
single ``[PASS]`` line on success (visible with ``pytest -s``).  Criteria
with a wall-clock budget assert it explicitly.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.stats import spearmanr

from helios_audit.cli import main as cli_main
from helios_audit.diagnostics import acf
from helios_audit.experiment import (
    ScenarioSpec,
    evaluate_lead_days,
    sensitivity,
    train_model,
)
from helios_audit.ingest import (
    LEAD_DAYS,
    WeatherVariable,
    align,
    categorize_forecast_sky,
    categorize_observed_sky,
    extract_peaks,
    parse_energy_csv,
    parse_forecast_csv,
    parse_observed_csv,
)
from helios_audit.metrics import bias, mae, mape
from helios_audit.mlp import LmConfig, forward, jacobian, n_params, train_lm
from helios_audit.resample import BootstrapConfig, bootstrap_ci
from helios_audit.seeding import spawn_rng, substream_seed
from helios_audit.select import (
    CorrMatrix,
    LOW_TARGET_CORRELATION,
    select_from_matrix,
    select_predictors,
)
from helios_audit.synth import SynthConfig, generate


def report(number, text):
    print(f"[PASS] criterion {number}: {text}")


# ---------------------------------------------------------------------------
# 1. sky-cover categorization


def test_criterion_01_sky_cover_categories():
    """Every 0.1-point percentage and all five category names map correctly."""
    start = time.perf_counter()

    def oracle(pct):
        if pct < 12.5:
            return 0
        if pct < 37.5:
            return 25
        if pct < 62.5:
            return 50
        if pct < 87.5:
            return 75
        return 100

    for i in range(1001):
        pct = i / 10.0
        assert categorize_forecast_sky(pct) == oracle(pct), pct

    names = {
        "Clear": 0,
        "Mostly Clear": 25,
        "Partly Cloudy": 50,
        "Mostly Cloudy": 75,
        "Cloudy": 100,
    }
    for name, value in names.items():
        assert categorize_observed_sky(name) == value
        assert categorize_observed_sky(name.upper()) == value
        assert categorize_observed_sky(f"  {name.lower()}  ") == value

    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    report(1, f"1001-step category grid and 5 names exact in {elapsed:.2f}s")


# ---------------------------------------------------------------------------
# 2. error metrics vs independent summation oracle


def test_criterion_02_metric_oracle():
    start = time.perf_counter()
    for trial in range(100):
        rng = spawn_rng(55, "metrics", trial)
        n = int(rng.integers(1, 10_001))
        actual = rng.uniform(0.5, 100.0, n)
        predicted = actual + rng.normal(0.0, 5.0, n)

        mape_ref = math.fsum(
            abs((a - p) / a) for a, p in zip(actual, predicted)
        ) / n * 100.0
        mae_ref = math.fsum(abs(a - p) for a, p in zip(actual, predicted)) / n
        bias_ref = math.fsum(a - p for a, p in zip(actual, predicted)) / n

        for got, ref in [
            (mape(actual, predicted), mape_ref),
            (mae(actual, predicted), mae_ref),
            (bias(actual, predicted), bias_ref),
        ]:
            assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref)), (trial, got, ref)

    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    report(2, f"100 fuzz samples (n up to 10^4) within 1e-12 rel in {elapsed:.2f}s")


# ---------------------------------------------------------------------------
# 3. predictor selection replay on a reference correlation matrix


def test_criterion_03_selection_replay():
    start = time.perf_counter()
    labels = ("energy", "sky_cover", "dew_point", "rel_humidity",
              "temperature", "wind_speed")
    values = np.array([
        [1.00, -0.42, 0.18, -0.61, 0.44, -0.09],
        [-0.42, 1.00, 0.14, 0.35, -0.09, 0.14],
        [0.18, 0.14, 1.00, 0.28, 0.90, -0.17],
        [-0.61, 0.35, 0.28, 1.00, -0.15, -0.02],
        [0.44, -0.09, 0.90, -0.15, 1.00, 0.17],
        [-0.09, 0.14, -0.17, -0.02, 0.17, 1.00],
    ])
    matrix = CorrMatrix(labels=labels, values=values,
                        counts=np.full((6, 6), 100))

    result = select_from_matrix(matrix)
    assert [v.code for v in result.selected] == ["SC", "RH", "T"]
    assert {(e.variable.code, e.reason) for e in result.excluded} == {
        ("DP", LOW_TARGET_CORRELATION),
        ("W", LOW_TARGET_CORRELATION),
    }

    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    report(3, f"reference matrix keeps SC/RH/T, drops DP/W in {elapsed:.3f}s")


# ---------------------------------------------------------------------------
# 4. bootstrap interval coverage


def test_criterion_04_bootstrap_coverage():
    start = time.perf_counter()
    master = 1234
    trials = 500
    covered = 0
    for k in range(trials):
        sample = spawn_rng(master, "coverage", k).normal(5.0, 2.0, 300)
        cfg = BootstrapConfig(cycles=2500, confidence=0.95,
                              seed=substream_seed(master, "coverage-ci", k))
        ci = bootstrap_ci(sample, cfg)
        if ci.lower <= 5.0 <= ci.upper:
            covered += 1

    fraction = covered / trials
    elapsed = time.perf_counter() - start
    assert 0.93 <= fraction <= 0.97, fraction
    assert elapsed < 300.0
    report(4, f"95% CI covered true mean in {covered}/{trials} trials "
              f"({fraction:.1%}) in {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# 5. bootstrap is worker-count invariant


def test_criterion_05_parallel_bootstrap_identical():
    rng = spawn_rng(88, "parallel")
    values = rng.gamma(2.0, 3.0, 400)
    for statistic in (np.mean, np.median):
        cfg = BootstrapConfig(cycles=2000, confidence=0.95, seed=31)
        serial = bootstrap_ci(values, cfg, statistic=statistic, workers=1)
        threaded = bootstrap_ci(values, cfg, statistic=statistic, workers=8)
        assert (serial.point, serial.lower, serial.upper) == (
            threaded.point, threaded.lower, threaded.upper)
    report(5, "1-worker and 8-worker bootstrap intervals are bit-identical")


# ---------------------------------------------------------------------------
# 6. autocorrelation diagnostics


def test_criterion_06_acf():
    start = time.perf_counter()

    result = acf(np.array([1.0, -1.0, 1.0, -1.0]), max_lag=3)
    assert result.r(1) == -0.75
    assert result.r(2) == 0.5
    assert result.r(3) == -0.25
    assert result.bound == pytest.approx(1.96 / 2.0)

    white = spawn_rng(99, "white").standard_normal(1000)
    white_result = acf(white, max_lag=100)
    assert white_result.exceed_fraction <= 0.10

    rng = spawn_rng(7, "ar1")
    series = np.empty(4000)
    series[0] = rng.standard_normal()
    for t in range(1, series.size):
        series[t] = 0.8 * series[t - 1] + rng.standard_normal()
    ar_result = acf(series, max_lag=100)
    assert 0.7 <= ar_result.r(1) <= 0.9

    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    report(6, f"hand values exact, white-noise exceedance "
              f"{white_result.exceed_fraction:.2f}, AR(1) r1="
              f"{ar_result.r(1):.3f} in {elapsed:.2f}s")


# ---------------------------------------------------------------------------
# 7. analytic Jacobian vs central finite differences


def test_criterion_07_jacobian():
    start = time.perf_counter()
    step = 1e-6
    for i in range(20):
        rng = spawn_rng(777, "jac", i)
        hidden = int(rng.integers(1, 5))
        k = int(rng.integers(1, 6))
        n = int(rng.integers(3, 9))
        X = rng.uniform(-1.5, 1.5, size=(n, k))
        params = rng.uniform(-1.0, 1.0, size=n_params(hidden, k))

        analytic = jacobian(params, X, hidden=hidden)
        numeric = np.empty_like(analytic)
        for j in range(params.size):
            up = params.copy()
            up[j] += step
            down = params.copy()
            down[j] -= step
            numeric[:, j] = -(forward(up, X, hidden=hidden)
                              - forward(down, X, hidden=hidden)) / (2 * step)

        assert np.allclose(analytic, numeric, rtol=1e-4, atol=1e-7), i

    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    report(7, f"20 random configurations within 1e-4 of central differences "
              f"in {elapsed:.2f}s")


# ---------------------------------------------------------------------------
# 8. training with identity activation reproduces least squares


def test_criterion_08_identity_equals_least_squares():
    start = time.perf_counter()
    rng = spawn_rng(2024, "ols")
    X = rng.uniform(-2.0, 2.0, size=(50, 3))
    y = X @ np.array([1.5, -0.7, 0.3]) + 0.8 + 0.01 * rng.standard_normal(50)

    design = np.column_stack([X, np.ones(50)])
    coefficients, *_ = np.linalg.lstsq(design, y, rcond=None)
    closed_form = design @ coefficients

    cfg = LmConfig(seed=0, max_iterations=200,
                   min_relative_mse_improvement=1e-15)
    result = train_lm(X, y, cfg, hidden=3, activation="identity")
    fitted = forward(result.params, X, hidden=3, activation="identity")

    gap = float(np.max(np.abs(fitted - closed_form)))
    assert gap < 1e-6, gap
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    report(8, f"identity-activation fit matches closed-form least squares "
              f"(max gap {gap:.1e}) in {elapsed:.2f}s")


# ---------------------------------------------------------------------------
# 9. accepted training steps strictly reduce MSE


def test_criterion_09_strict_descent():
    runs = 0
    for seed in range(5):
        rng = spawn_rng(seed, "descent-data")

        X1 = rng.uniform(-2.0, 2.0, size=(40, 2))
        y1 = np.tanh(X1 @ np.array([1.0, -0.8])) + 0.05 * rng.standard_normal(40)

        X2 = rng.uniform(-3.0, 3.0, size=(30, 1))
        y2 = np.sin(2.0 * X2[:, 0]) + 0.1 * rng.standard_normal(30)

        for X, y in [(X1, y1), (X2, y2)]:
            result = train_lm(X, y, LmConfig(seed=seed, max_iterations=60))
            path = np.asarray(result.mse_path)
            assert result.iterations == path.size - 1
            if path.size > 1:
                assert np.all(np.diff(path) < 0.0), (seed, path)
            runs += 1
    report(9, f"MSE path strictly decreasing on all {runs} seeded runs")


# ---------------------------------------------------------------------------
# 10. end-to-end recovery of planted structure


def test_criterion_10_end_to_end(tmp_path):
    start = time.perf_counter()
    generate(SynthConfig(days=365, seed=0), tmp_path)
    observations = parse_observed_csv(tmp_path / "observed.csv")
    forecasts = parse_forecast_csv(tmp_path / "forecast.csv")
    energy = parse_energy_csv(tmp_path / "energy.csv")

    # (a) audited bias signs match the planted offsets,
    # (b) MAE grows with lead day (Spearman rho >= 0.9 per variable)
    positive_bias = {WeatherVariable.WIND_SPEED}
    for variable in WeatherVariable:
        maes = []
        for day in LEAD_DAYS:
            pairs, _ = align(observations, forecasts, variable, day)
            obs = np.array([p.observed_value for p in pairs])
            fc = np.array([p.forecast_value for p in pairs])
            cell_bias = bias(obs, fc)
            if variable in positive_bias:
                assert cell_bias > 0.0, (variable.code, day, cell_bias)
            else:
                assert cell_bias < 0.0, (variable.code, day, cell_bias)
            maes.append(mae(obs, fc))
        rho = float(spearmanr(list(LEAD_DAYS), maes).statistic)
        assert rho >= 0.9, (variable.code, rho, maes)

    # (c) feeding forecast weather always scores worse than observed weather
    peaks = extract_peaks(energy, observations, forecasts)
    selected = select_predictors(peaks).selected
    trained = train_model(peaks, selected, seed=substream_seed(0, "train"))
    evaluation = evaluate_lead_days(trained, peaks)
    for day in LEAD_DAYS:
        assert evaluation.days[day].mape > evaluation.baseline.mape, day

    # (d) fixing humidity helps more than fixing any other input
    means = {}
    for variable in selected:
        curve = sensitivity(trained, peaks,
                            ScenarioSpec(perfect_variable=variable))
        means[variable.code] = float(
            np.mean([curve[day].mape for day in LEAD_DAYS]))
    assert means["RH"] < means["SC"], means
    assert means["RH"] < means["T"], means

    elapsed = time.perf_counter() - start
    assert elapsed < 120.0
    report(10, f"bias signs, MAE growth, forecast penalty and humidity "
               f"dominance all hold in {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# 11. every command is deterministic under a fixed seed


def _tree_bytes(root: Path) -> dict:
    return {p.name: p.read_bytes() for p in sorted(root.iterdir()) if p.is_file()}


def test_criterion_11_cli_determinism(data_dir, tmp_path):
    data_args = ["--in", str(data_dir)]
    commands = [
        ["audit", *data_args, "--seed", "0"],
        ["select", *data_args, "--seed", "0"],
        ["train", *data_args, "--seed", "0"],
        ["evaluate", *data_args, "--seed", "0"],
        ["sensitivity", *data_args, "--seed", "0"],
        ["sweep", *data_args, "--seed", "0"],
        ["synth", "--seed", "5", "--days", "45"],
    ]
    checked = 0
    for argv in commands:
        first = tmp_path / f"{argv[0]}_a"
        second = tmp_path / f"{argv[0]}_b"
        assert cli_main([*argv, "--out", str(first)]) == 0
        assert cli_main([*argv, "--out", str(second)]) == 0
        bytes_first = _tree_bytes(first)
        bytes_second = _tree_bytes(second)
        assert bytes_first.keys() == bytes_second.keys(), argv[0]
        assert bytes_first == bytes_second, argv[0]
        checked += len(bytes_first)
    report(11, f"7 commands rerun byte-identical across {checked} output files")
