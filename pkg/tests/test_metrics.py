"""Error metric, correlation and plot-data tests against naive oracles."""

import math
from datetime import datetime

import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heliocast.metrics import (
    correlation_table,
    error_metrics,
    hourly_error_distribution,
    lag_plot_data,
    pearson,
)

from oracles import naive_metrics, sorted_quantile


class TestErrorMetrics:
    def test_perfect_prediction(self):
        report = error_metrics([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert report.mae == 0 and report.mse == 0 and report.rmse == 0
        assert report.rrmse == 0 and report.r_squared == 1.0

    def test_hand_case(self):
        report = error_metrics([1.0, 2.0], [2.0, 2.0])
        assert report.mae == pytest.approx(0.5)
        assert report.mse == pytest.approx(0.5)
        assert report.rmse == pytest.approx(math.sqrt(0.5))
        assert report.rrmse == pytest.approx(0.25)
        assert report.r_squared == pytest.approx(-1.0)

    def test_matches_naive_loop(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            actual = rng.uniform(-10, 50, size=1000)
            predicted = actual + rng.normal(0, 5, size=1000)
            report = error_metrics(actual, predicted)
            reference = naive_metrics(actual.tolist(), predicted.tolist())
            for key, value in reference.items():
                assert getattr(report, key) == pytest.approx(value, rel=1e-12, abs=1e-12)

    def test_all_zero_predictions_rejected(self):
        with pytest.raises(ValueError):
            error_metrics([1.0, 2.0], [0.0, 0.0])

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(
            st.tuples(
                st.floats(min_value=-1e4, max_value=1e4),
                st.floats(min_value=-1e4, max_value=1e4),
            ),
            min_size=2,
            max_size=60,
        )
    )
    def test_mae_never_exceeds_rmse(self, pairs):
        actual = [a for a, _ in pairs]
        predicted = [p for _, p in pairs]
        if sum(p * p for p in predicted) == 0:
            return
        report = error_metrics(actual, predicted)
        assert report.mae <= report.rmse + 1e-9


class TestPearson:
    def test_perfect_positive(self):
        x = np.arange(10.0)
        assert pearson(x, 3 * x + 1) == pytest.approx(1.0)

    def test_perfect_negative(self):
        x = np.arange(10.0)
        assert pearson(x, -x) == pytest.approx(-1.0)

    def test_hand_case(self):
        assert pearson([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5)

    def test_symmetry_and_affine_invariance(self):
        rng = np.random.default_rng(1)
        x = rng.uniform(size=40)
        y = rng.uniform(size=40)
        assert pearson(x, y) == pytest.approx(pearson(y, x), rel=1e-12)
        assert pearson(2.5 * x + 3, y) == pytest.approx(pearson(x, y), rel=1e-9)
        assert pearson(-2.5 * x + 3, y) == pytest.approx(-pearson(x, y), rel=1e-9)

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])


class TestCorrelationTable:
    def test_five_rows(self, synth_dataset):
        table = correlation_table(synth_dataset)
        assert set(table) == {
            "ideal_irradiance",
            "irradiance",
            "ambient_temp",
            "module_temp",
            "cloud_cover",
        }

    def test_signs_match_construction(self, synth_dataset):
        table = correlation_table(synth_dataset)
        # generation is driven by irradiance and attenuated by cloud
        assert table["irradiance"] > 0.95
        assert table["ideal_irradiance"] > 0.5
        assert table["cloud_cover"] < 0.0

    def test_proportional_generation_is_perfectly_correlated(self, synth_dataset):
        frame = synth_dataset.copy()
        frame["generation_kw"] = 1.2 * frame["irradiance_wm2"]
        table = correlation_table(frame)
        assert table["irradiance"] == pytest.approx(1.0, abs=1e-12)


class TestLagPlot:
    def test_hand_case(self):
        pairs = lag_plot_data([1.0, 2.0, 3.0])
        np.testing.assert_array_equal(pairs, [[1.0, 2.0], [2.0, 3.0]])

    def test_constant_series_on_diagonal(self):
        pairs = lag_plot_data([4.0] * 6)
        assert (pairs[:, 0] == pairs[:, 1]).all()

    def test_pair_count(self):
        rng = np.random.default_rng(2)
        for n in [2, 5, 50]:
            series = rng.uniform(size=n)
            assert lag_plot_data(series).shape == (n - 1, 2)

    def test_short_series_rejected(self):
        with pytest.raises(ValueError):
            lag_plot_data([1.0], lag=1)


class TestHourlyErrorDistribution:
    def _index(self, n):
        return pd.date_range(datetime(2021, 6, 1), periods=n, freq="15min")

    def test_unbiased_noise_has_near_zero_medians(self):
        rng = np.random.default_rng(3)
        n = 96 * 30
        actual = np.full(n, 100.0)
        predicted = actual + rng.normal(0, 10, n)
        stats = hourly_error_distribution(actual, predicted, self._index(n))
        for hour_stats in stats.values():
            assert abs(hour_stats["median"]) < 3.0

    def test_constant_bias_shows_up_everywhere(self):
        n = 96 * 5
        actual = np.full(n, 100.0)
        predicted = actual + 50.0
        stats = hourly_error_distribution(actual, predicted, self._index(n))
        assert all(s["median"] == pytest.approx(50.0) for s in stats.values())

    def test_quartiles_match_sorting_oracle(self):
        rng = np.random.default_rng(4)
        n = 96 * 10
        actual = rng.uniform(0, 500, n)
        predicted = actual + rng.normal(0, 25, n)
        index = self._index(n)
        stats = hourly_error_distribution(actual, predicted, index)
        errors = predicted - actual
        hours = index.hour.to_numpy()
        for hour, hour_stats in stats.items():
            errs = errors[hours == hour].tolist()
            assert hour_stats["q1"] == pytest.approx(sorted_quantile(errs, 0.25), rel=1e-12)
            assert hour_stats["median"] == pytest.approx(sorted_quantile(errs, 0.5), rel=1e-12)
            assert hour_stats["q3"] == pytest.approx(sorted_quantile(errs, 0.75), rel=1e-12)

    def test_outliers_beyond_whiskers(self):
        n = 96
        actual = np.full(n, 100.0)
        predicted = actual.copy()
        predicted[10] += 500.0  # one wild error at hour 2
        stats = hourly_error_distribution(actual, predicted, self._index(n))
        assert 500.0 in stats[2]["outliers"]
        assert stats[2]["whisker_high"] < 500.0
