"""Ensemble of trained regressors weighted by inverse validation RRMSE."""

from __future__ import annotations

import numpy as np

from heliocast.metrics import rrmse

# A member with zero validation error would get an infinite weight; cap it
# so it dominates without blowing up the arithmetic.
MAX_WEIGHT = 1e6


def inverse_rrmse_weights(predictions: dict[str, np.ndarray], actual) -> dict[str, float]:
    """Weight per member: the inverse of its RRMSE on the validation window."""
    y = np.asarray(actual, dtype=float).reshape(-1)
    if y.size == 0:
        raise ValueError("validation window is empty")
    weights = {}
    for name, pred in predictions.items():
        score = rrmse(y, pred)
        weights[name] = min(1.0 / score, MAX_WEIGHT) if score > 0 else MAX_WEIGHT
    return weights


class EnsembleRegressor:
    """Weighted average of member predictions over the sum of the weights."""

    def __init__(self, members: dict, weights: dict[str, float] | None = None):
        if not members:
            raise ValueError("ensemble needs at least one member")
        self.members = dict(members)
        if weights is not None:
            self._set_weights(weights)
        else:
            self.weights = None

    def _set_weights(self, weights: dict[str, float]):
        if set(weights) != set(self.members):
            raise ValueError("weights and members must cover the same names")
        if any(w <= 0 for w in weights.values()):
            raise ValueError("ensemble weights must be strictly positive")
        self.weights = dict(weights)

    def fit_weights(self, val_features, val_targets) -> "EnsembleRegressor":
        predictions = {
            name: np.asarray(model.predict(val_features), dtype=float)
            for name, model in self.members.items()
        }
        self._set_weights(inverse_rrmse_weights(predictions, val_targets))
        return self

    def predict(self, features) -> np.ndarray:
        if self.weights is None:
            raise ValueError("ensemble weights have not been fitted")
        return combine_predictions(
            {name: np.asarray(m.predict(features), dtype=float) for name, m in self.members.items()},
            self.weights,
        )


def combine_predictions(predictions: dict[str, np.ndarray], weights: dict[str, float]) -> np.ndarray:
    """Pointwise weighted average; always inside the members' min/max envelope."""
    total = sum(weights.values())
    if total <= 0:
        raise ValueError("ensemble weights must sum to a positive value")
    acc = None
    for name, pred in predictions.items():
        term = weights[name] * np.asarray(pred, dtype=float)
        acc = term if acc is None else acc + term
    return acc / total
