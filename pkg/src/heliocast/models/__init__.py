"""Trainable irradiance regressors and their serialization."""

from heliocast.models.ensemble import EnsembleRegressor, inverse_rrmse_weights
from heliocast.models.network import NeuralNet
from heliocast.models.quadratic import QuadraticRegression
from heliocast.models.svr import SupportVectorRegressor
from heliocast.models.tree import RegressionTree

__all__ = [
    "EnsembleRegressor",
    "NeuralNet",
    "QuadraticRegression",
    "RegressionTree",
    "SupportVectorRegressor",
    "inverse_rrmse_weights",
]
