"""Ensemble weighting and module-temperature regression tests."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heliocast.models.ensemble import (
    MAX_WEIGHT,
    EnsembleRegressor,
    combine_predictions,
    inverse_rrmse_weights,
)
from heliocast.models.quadratic import QuadraticRegression


class Constant:
    def __init__(self, value):
        self.value = value

    def predict(self, features):
        return np.full(np.atleast_2d(features).shape[0], self.value)


class TestWeights:
    def test_inverse_of_validation_rrmse(self):
        rng = np.random.default_rng(0)
        actual = rng.uniform(100, 900, size=50)
        predictions = {
            "a": actual + rng.normal(0, 30, 50),
            "b": actual + rng.normal(0, 60, 50),
            "c": actual + rng.normal(0, 120, 50),
        }
        weights = inverse_rrmse_weights(predictions, actual)
        # independent recomputation straight from the definition
        for name, pred in predictions.items():
            mse = np.mean((actual - pred) ** 2)
            expected = 1.0 / np.sqrt(mse / np.sum(pred**2))
            assert weights[name] == pytest.approx(expected, rel=1e-12)

    def test_perfect_member_weight_capped(self):
        actual = np.array([1.0, 2.0, 3.0])
        weights = inverse_rrmse_weights({"perfect": actual.copy()}, actual)
        assert weights["perfect"] == MAX_WEIGHT

    def test_all_weights_strictly_positive(self):
        rng = np.random.default_rng(1)
        actual = rng.uniform(1, 2, size=20)
        predictions = {"a": actual + 5, "b": actual - 5}
        weights = inverse_rrmse_weights(predictions, actual)
        assert all(w > 0 for w in weights.values())


class TestCombine:
    def test_equal_weights_give_plain_mean(self):
        predictions = {"a": np.array([300.0]), "b": np.array([400.0]), "c": np.array([500.0])}
        out = combine_predictions(predictions, {"a": 1.0, "b": 1.0, "c": 1.0})
        assert out[0] == pytest.approx(400.0, abs=1e-12)

    def test_two_to_one_weighting(self):
        predictions = {"a": np.array([100.0]), "b": np.array([200.0]), "c": np.array([200.0])}
        out = combine_predictions(predictions, {"a": 2.0, "b": 1.0, "c": 1.0})
        assert out[0] == pytest.approx(150.0)

    def test_rrmse_ratio_one_two_two_gives_weights_two_one_one(self):
        rng = np.random.default_rng(2)
        actual = rng.uniform(100, 200, size=400)
        noise = rng.normal(size=400)
        sigma = np.std(noise * actual)  # common shape, scaled differently
        predictions = {
            "a": actual + 1.0 * noise,
            "b": actual + 2.0 * noise,
            "c": actual + 2.0 * noise,
        }
        weights = inverse_rrmse_weights(predictions, actual)
        assert weights["a"] / weights["b"] == pytest.approx(2.0, rel=0.05)
        assert weights["b"] == pytest.approx(weights["c"], rel=0.05)

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(st.floats(min_value=-1e3, max_value=1e3), min_size=3, max_size=3),
        st.lists(st.floats(min_value=0.01, max_value=50), min_size=3, max_size=3),
    )
    def test_output_inside_member_envelope(self, values, weights):
        predictions = {f"m{i}": np.array([v]) for i, v in enumerate(values)}
        names = list(predictions)
        out = combine_predictions(predictions, dict(zip(names, weights)))
        assert min(values) - 1e-9 <= out[0] <= max(values) + 1e-9

    def test_permutation_covariant(self):
        predictions = {"a": np.array([10.0]), "b": np.array([20.0]), "c": np.array([40.0])}
        weights = {"a": 0.5, "b": 1.5, "c": 3.0}
        forward = combine_predictions(predictions, weights)
        shuffled = combine_predictions(
            {k: predictions[k] for k in ["c", "a", "b"]},
            {k: weights[k] for k in ["b", "c", "a"]},
        )
        assert forward[0] == shuffled[0]


class TestEnsembleRegressor:
    def test_fit_weights_and_predict(self):
        members = {"lo": Constant(100.0), "mid": Constant(200.0), "hi": Constant(300.0)}
        rng = np.random.default_rng(3)
        val_x = rng.uniform(size=(30, 2))
        val_y = np.full(30, 200.0)
        model = EnsembleRegressor(members).fit_weights(val_x, val_y)
        out = model.predict(val_x[:1])[0]
        assert 100.0 <= out <= 300.0
        # the exact member dominates through the weight cap
        assert out == pytest.approx(200.0, abs=1.0)

    def test_unfitted_predict_rejected(self):
        with pytest.raises(ValueError):
            EnsembleRegressor({"a": Constant(1.0)}).predict(np.zeros((1, 2)))


class TestQuadraticRegression:
    def test_exact_recovery(self):
        x = np.linspace(-10, 40, 80)
        y = 2.0 + 0.5 * x + 0.01 * x**2
        model = QuadraticRegression().fit(x, y)
        np.testing.assert_allclose(model.coefficients_, [2.0, 0.5, 0.01], atol=1e-8)

    def test_constant_input_rejected(self):
        with pytest.raises(ValueError):
            QuadraticRegression().fit(np.full(10, 3.0), np.arange(10.0))

    def test_residuals_orthogonal_to_design(self):
        rng = np.random.default_rng(4)
        x = rng.uniform(0, 100, 200)
        y = 1.0 + 0.8 * x + 0.002 * x**2 + rng.normal(0, 2, 200)
        model = QuadraticRegression().fit(x, y)
        residuals = y - model.predict(x)
        design = np.column_stack([np.ones_like(x), x, x * x])
        # normal equations: residuals are orthogonal to every design column
        products = design.T @ residuals / len(x)
        scale = np.abs(design).max()
        np.testing.assert_allclose(products / scale, 0.0, atol=1e-8)

    def test_prediction_evaluates_polynomial(self):
        model = QuadraticRegression()
        model.coefficients_ = np.array([1.0, 2.0, 3.0])
        assert model.predict(2.0) == pytest.approx(1 + 4 + 12)
