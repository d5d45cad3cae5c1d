"""Acceptance suite: one test per criterion, each printing a PASS line.

Expected values come from the independent oracles in ``oracles.py`` (day
counting, exhaustive enumeration, finite differences, closed-form variance
decompositions), never from the implementation under test.
"""

import time
from datetime import datetime, timedelta

import numpy as np
import pytest

from heliocast.errors import LookaheadError
from heliocast.geometry import (
    clear_sky_curve,
    declination,
    julian_date,
    solar_noon_clock_hours,
)
from heliocast.metrics import error_metrics
from heliocast.models.ensemble import combine_predictions, inverse_rrmse_weights
from heliocast.models.network import NeuralNet
from heliocast.models.svr import SupportVectorRegressor
from heliocast.models.tree import RegressionTree
from heliocast.pipeline import forecast as forecast_mod
from heliocast.pipeline.forecast import FencedFrame, ForecastJob, backcast, forecast
from heliocast.pipeline.ingest import build_dataset
from heliocast.pipeline.train import TrainedModelSet, rolling_retrain
from heliocast.plant import estimate_kw_ac
from heliocast.sensitivity import sobol_first_order
from heliocast.synth import generate_frames

from oracles import (
    BruteForceTree,
    central_difference_gradients,
    ishigami,
    ishigami_analytic_indices,
    julian_date_by_day_count,
    naive_metrics,
    svr_dual_brute_force,
)

REFERENCE_DATES = [
    (1990, 1, 1),
    (1991, 3, 21),
    (1992, 2, 29),
    (1994, 7, 4),
    (1996, 12, 31),
    (1999, 12, 31),
    (2000, 1, 1),
    (2000, 2, 29),
    (2003, 9, 23),
    (2005, 6, 21),
    (2008, 2, 29),
    (2010, 10, 10),
    (2012, 12, 21),
    (2015, 5, 5),
    (2017, 9, 10),
    (2020, 2, 29),
    (2023, 3, 1),
    (2025, 8, 8),
    (2028, 11, 30),
    (2030, 12, 31),
]


def test_c01_astronomy_oracle(miami_site):
    start = time.perf_counter()
    for ymd in REFERENCE_DATES:
        assert julian_date(*ymd, 0.0) == julian_date_by_day_count(*ymd), ymd
    # equinox crossings of the declination formula (Mar 21/22, Sep 20/21);
    # its phase sits 1-2 days off the astronomical dates
    for n in (80, 81, 263, 264):
        assert abs(declination(n)) < 0.6
    assert declination(172) == pytest.approx(23.45, abs=0.05)
    assert declination(355) == pytest.approx(-23.45, abs=0.05)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(f"\nACCEPTANCE-01 astronomy oracle: PASS ({elapsed:.2f}s)")


def test_c02_clear_sky_shape(miami_site):
    start = time.perf_counter()
    curve = clear_sky_curve(miami_site, datetime(2021, 6, 21), datetime(2021, 6, 22), 15)
    ghi = curve.ghi_wm2
    positive = np.nonzero(ghi > 0)[0]
    assert positive.size > 0
    first, last = positive[0], positive[-1]
    # zero before sunrise and after sunset, positive throughout the day
    assert (ghi[:first] == 0.0).all()
    assert (ghi[last + 1 :] == 0.0).all()
    assert (ghi[first : last + 1] > 0.0).all()
    # unimodal up to the quintic's known ~0.5% droop above 84.5 deg altitude
    peak = int(np.argmax(ghi))
    rising = np.diff(ghi[first : peak + 1])
    falling = np.diff(ghi[peak : last + 1])
    assert (rising >= -5.0).all()
    assert (falling <= 5.0).all()
    # peak lands within 30 minutes of computed solar noon
    noon_hours = solar_noon_clock_hours(miami_site, 172)
    peak_stamp = curve.timestamps[peak]
    peak_hours = peak_stamp.hour + peak_stamp.minute / 60.0 + 0.125  # step midpoint
    assert abs(peak_hours - noon_hours) <= 0.5
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(f"\nACCEPTANCE-02 clear-sky shape: PASS ({elapsed:.2f}s)")


def test_c03_estimator_arithmetic(reference_plant):
    start = time.perf_counter()
    # the oracle is the derived product of the derates themselves
    derived = 1400.0 * (1000.0 / 1000.0) * 0.9 * 0.99 * 0.97 * 0.98
    estimate = estimate_kw_ac(reference_plant, 1000.0, 25.0)
    assert estimate == pytest.approx(derived, abs=0.1)
    assert estimate == pytest.approx(derived, abs=1e-9)
    hot = estimate_kw_ac(reference_plant, 1000.0, 35.0)
    assert hot == pytest.approx(estimate * 0.95, rel=1e-12)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(f"\nACCEPTANCE-03 estimator arithmetic: PASS ({elapsed:.2f}s)")


def test_c04_ann_gradient_check():
    start = time.perf_counter()
    net = NeuralNet(widths=(3, 8, 8, 8, 8, 8, 1), seed=1234)
    rng = np.random.default_rng(99)
    features = rng.uniform(size=(64, 3))
    targets = 0.2 + 0.6 * features[:, 0] - 0.3 * features[:, 1] * features[:, 2]
    grads_w, grads_b = net.gradient(features, targets)
    ref_w, ref_b = central_difference_gradients(net, features, targets, h=1e-5)
    worst = 0.0
    for analytic, numeric in zip(grads_w + grads_b, ref_w + ref_b):
        denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
        worst = max(worst, float((np.abs(analytic - numeric) / denom).max()))
    assert worst < 1e-4
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    print(f"\nACCEPTANCE-04 ann gradient check: PASS (max rel err {worst:.2e}, {elapsed:.2f}s)")


def test_c05_svr_brute_force_equivalence():
    start = time.perf_counter()
    problems = [
        (0, 4, 5.0, 0.1, 1.0),
        (1, 5, 5.0, 0.1, 2.0),
        (2, 5, 50.0, 0.05, 1.0),
        (3, 6, 2.0, 0.2, 0.5),
        (4, 6, 10.0, 0.1, 1.5),
    ]
    for seed, n, c, epsilon, gamma in problems:
        rng = np.random.default_rng(seed)
        x = rng.uniform(size=(n, 2))
        y = rng.uniform(size=n)
        model = SupportVectorRegressor(c=c, epsilon=epsilon, gamma=gamma, tol=1e-8).fit(x, y)
        reference = svr_dual_brute_force(x, y, c=c, epsilon=epsilon, gamma=gamma)
        assert model.dual_objective_ == pytest.approx(reference, abs=1e-4), (seed, n)

    rng = np.random.default_rng(7)
    x = rng.uniform(size=(200, 1))
    y = 0.75 * x[:, 0] + 0.1
    model = SupportVectorRegressor(c=1000.0, epsilon=0.1, tol=1e-4).fit(x, y)
    residuals = np.abs(model.predict(x) - y)
    inside = (residuals <= 0.1 + 1e-3).mean()
    assert inside >= 0.95
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    print(f"\nACCEPTANCE-05 svr brute-force equivalence: PASS ({elapsed:.2f}s)")


def test_c06_cart_oracle():
    start = time.perf_counter()
    for seed in range(20):
        rng = np.random.default_rng(1000 + seed)
        x = rng.uniform(size=(200, 3))
        y = (
            2.0 * x[:, 0]
            + np.sin(5 * x[:, 1])
            + 0.5 * x[:, 2] ** 2
            + 0.2 * rng.normal(size=200)
        )
        fast = RegressionTree(max_depth=8, min_leaf=5).fit(x, y)
        slow = BruteForceTree(max_depth=8, min_leaf=5).fit(x, y)
        probe = rng.uniform(-0.3, 1.3, size=(300, 3))
        np.testing.assert_array_equal(fast.predict(probe), slow.predict(probe))
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    print(f"\nACCEPTANCE-06 cart oracle: PASS (20 datasets, {elapsed:.2f}s)")


def test_c07_metrics_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    for _ in range(100):
        n = int(rng.integers(5, 400))
        actual = rng.uniform(-100, 100, size=n)
        predicted = actual + rng.normal(0, 20, size=n)
        report = error_metrics(actual, predicted)
        reference = naive_metrics(actual.tolist(), predicted.tolist())
        for key, value in reference.items():
            assert getattr(report, key) == pytest.approx(value, rel=1e-12, abs=1e-12)
    hand = error_metrics([1.0, 2.0], [2.0, 2.0])
    assert hand.rrmse == 0.25
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(f"\nACCEPTANCE-07 metrics oracle: PASS ({elapsed:.2f}s)")


def test_c08_sobol_calibration():
    start = time.perf_counter()
    s1, s2, s3 = ishigami_analytic_indices(a=7.0, b=0.1)
    assert s1 == pytest.approx(0.3139, abs=5e-4)
    assert s2 == pytest.approx(0.4424, abs=5e-4)
    report = sobol_first_order(
        ishigami, [(-np.pi, np.pi)] * 3, n_samples=100_000, seed=7, names=["x1", "x2", "x3"]
    )
    assert report.first_order["x1"] == pytest.approx(s1, abs=0.05)
    assert report.first_order["x2"] == pytest.approx(s2, abs=0.05)
    assert report.first_order["x3"] == pytest.approx(s3, abs=0.05)
    ignored = sobol_first_order(
        lambda m: m[:, 0], [(0, 1), (0, 1)], n_samples=100_000, seed=8
    )
    assert ignored.first_order["x2"] == pytest.approx(0.0, abs=0.02)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    print(f"\nACCEPTANCE-08 sobol calibration: PASS ({elapsed:.2f}s)")


def test_c09_ensemble_contract():
    start = time.perf_counter()
    rng = np.random.default_rng(55)
    members = {name: rng.uniform(0, 1000, size=10_000) for name in ("a", "b", "c")}
    equal = combine_predictions(members, {"a": 1.0, "b": 1.0, "c": 1.0})
    plain_mean = (members["a"] + members["b"] + members["c"]) / 3.0
    np.testing.assert_allclose(equal, plain_mean, atol=1e-12 * 1000)

    weights = {"a": 3.0, "b": 1.0, "c": 0.25}
    blended = combine_predictions(members, weights)
    lower = np.minimum(np.minimum(members["a"], members["b"]), members["c"])
    upper = np.maximum(np.maximum(members["a"], members["b"]), members["c"])
    assert (blended >= lower - 1e-9).all() and (blended <= upper + 1e-9).all()

    actual = rng.uniform(100, 900, size=300)
    predictions = {
        "a": actual + rng.normal(0, 25, 300),
        "b": actual + rng.normal(0, 50, 300),
        "c": actual + rng.normal(0, 100, 300),
    }
    computed = inverse_rrmse_weights(predictions, actual)
    for name, pred in predictions.items():
        mse = sum((av - pv) ** 2 for av, pv in zip(actual, pred)) / len(actual)
        expected = 1.0 / ((mse / sum(pv * pv for pv in pred)) ** 0.5)
        assert computed[name] == pytest.approx(expected, rel=1e-12)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"\nACCEPTANCE-09 ensemble contract: PASS ({elapsed:.2f}s)")


@pytest.fixture(scope="module")
def benchmark_data(app_config):
    """Two years of synthetic measurements for the end-to-end benchmark."""
    frames = generate_frames(app_config, datetime(2019, 1, 1), datetime(2021, 1, 1), seed=42)
    dataset = build_dataset(frames["weather"], frames["production"], app_config)
    return frames, dataset


def test_c10_end_to_end_benchmark(app_config, benchmark_data, tmp_path):
    start = time.perf_counter()
    frames, dataset = benchmark_data
    eval_days = [datetime(2020, 12, 1) + timedelta(days=k) for k in range(31)]
    issue_times = [day + timedelta(hours=5) for day in eval_days]

    models_dir = tmp_path / "models"
    paths = rolling_retrain(dataset, app_config, issue_times, models_dir, window_days=365)
    assert len(paths) == len(eval_days)

    names = ("ann", "svm", "cart", "ensemble")
    collected = {name: [] for name in names}
    actual_steps = []
    daily_pred = {name: [] for name in names}
    daily_actual = []
    for issue, path in zip(issue_times, paths):
        models = TrainedModelSet.load(path)
        job = ForecastJob(
            site=app_config.site, plant=app_config.plant, issue_time=issue, horizon_hours=19
        )
        series = forecast(job, models, frames["nwp"], app_config)
        joined = series.frame.join(dataset["irradiance_wm2"].rename("actual"), how="inner")
        actual_steps.append(joined["actual"].to_numpy())
        for name in names:
            collected[name].append(joined[f"irradiance_{name}_wm2"].to_numpy())
            daily_pred[name].append(joined[f"irradiance_{name}_wm2"].sum() * 0.25)
        daily_actual.append(joined["actual"].sum() * 0.25)

    actual_all = np.concatenate(actual_steps)
    reports = {name: error_metrics(actual_all, np.concatenate(collected[name])) for name in names}
    ensemble = reports["ensemble"]
    assert ensemble.r_squared >= 0.85
    assert ensemble.rrmse <= 0.35

    daily_actual = np.asarray(daily_actual)
    daily_mae = {
        name: float(np.mean(np.abs(daily_actual - np.asarray(daily_pred[name]))))
        for name in names
    }
    member_best = min(daily_mae[name] for name in ("ann", "svm", "cart"))
    assert daily_mae["ensemble"] <= member_best * 1.15

    elapsed = time.perf_counter() - start
    assert elapsed < 600.0
    print(
        f"\nACCEPTANCE-10 end-to-end benchmark: PASS "
        f"(ensemble r2={ensemble.r_squared:.3f}, rrmse={ensemble.rrmse:.4f}, "
        f"daily mae ensemble={daily_mae['ensemble']:.1f} vs best member={member_best:.1f}, "
        f"{elapsed:.0f}s)"
    )


def test_c11_no_lookahead_mutation(app_config, trained_models, synth_dataset, synth_frames, monkeypatch):
    start = time.perf_counter()
    issue = datetime(2020, 3, 11, 5, 0)
    job = ForecastJob(
        site=app_config.site, plant=app_config.plant, issue_time=issue, horizon_hours=12
    )
    history = FencedFrame(synth_dataset, issue)
    # the intact path reads nothing after the issue instant
    forecast(job, trained_models, synth_frames["nwp"], app_config, history=history)

    def leaky_audit(history, index):
        if history is not None:
            history.slice(end=index.max())

    monkeypatch.setattr(forecast_mod, "_audit_history_inputs", leaky_audit)
    with pytest.raises(LookaheadError):
        forecast(job, trained_models, synth_frames["nwp"], app_config, history=history)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"\nACCEPTANCE-11 no-lookahead mutation: PASS ({elapsed:.2f}s)")


def test_c12_backcast_reconstruction(app_config, trained_models, synth_dataset):
    start = time.perf_counter()
    gappy = synth_dataset.copy()
    gap = (gappy.index >= datetime(2020, 3, 11)) & (gappy.index < datetime(2020, 3, 13))
    truth = gappy.loc[gap, "irradiance_wm2"].to_numpy()
    gappy.loc[gap, "irradiance_wm2"] = np.nan
    filled, gaps = backcast(gappy, trained_models, app_config)
    assert len(gaps) == 1
    reconstructed = filled.loc[gap, "irradiance_wm2"].to_numpy()
    score = error_metrics(truth, reconstructed)
    assert score.rrmse <= 0.35
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    print(
        f"\nACCEPTANCE-12 backcast reconstruction: PASS "
        f"(rrmse={score.rrmse:.4f}, {elapsed:.2f}s)"
    )
