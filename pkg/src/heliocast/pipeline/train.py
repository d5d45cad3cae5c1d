"""Rolling-window retraining of the irradiance regressors.

Each retrain fits the three member models and the module-temperature
regression on a trailing window of the dataset, computes ensemble weights
on the window's validation tail, and persists everything as one versioned
bundle.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np
import pandas as pd

from heliocast.metrics import rrmse
from heliocast.models.ensemble import combine_predictions, inverse_rrmse_weights
from heliocast.models.network import NeuralNet
from heliocast.models.quadratic import QuadraticRegression
from heliocast.models.store import load_bundle, save_bundle
from heliocast.models.svr import SupportVectorRegressor
from heliocast.models.tree import RegressionTree
from heliocast.pipeline.config import AppConfig
from heliocast.prep import MinMaxScaler

FEATURE_COLUMNS = ["ideal_irradiance_wm2", "cloud_cover_pct", "module_temp_f"]
TARGET_COLUMN = "irradiance_wm2"
MEMBER_NAMES = ("ann", "svm", "cart")


@dataclass
class TrainedModelSet:
    """A fitted model family plus the scalers it was trained with."""

    version: str
    seed: int
    feature_scaler: MinMaxScaler
    target_scaler: MinMaxScaler
    module_temp: QuadraticRegression
    ann: NeuralNet
    svm: SupportVectorRegressor
    cart: RegressionTree
    ensemble_weights: dict[str, float]
    validation_rrmse: dict[str, float]
    window_start: str
    window_end: str
    training_rows: int

    def predict_member(self, name: str, features: np.ndarray) -> np.ndarray:
        """Irradiance prediction in W/m^2 from raw (unscaled) features."""
        scaled = self.feature_scaler.transform(features)
        # CART and SVR regress the target in W/m^2 directly (the epsilon tube
        # is meant in irradiance units); the ANN works on the scaled target.
        if name == "cart":
            return self.cart.predict(scaled)
        if name == "svm":
            return self.svm.predict(scaled)
        if name == "ann":
            raw = self.ann.predict(scaled)
            return self.target_scaler.inverse_transform(raw.reshape(-1, 1))[:, 0]
        raise ValueError(f"unknown model '{name}'")

    def predict_all(self, features: np.ndarray) -> dict[str, np.ndarray]:
        predictions = {name: self.predict_member(name, features) for name in MEMBER_NAMES}
        predictions["ensemble"] = combine_predictions(
            {n: predictions[n] for n in MEMBER_NAMES}, self.ensemble_weights
        )
        return predictions

    def to_bundle(self) -> dict:
        return {
            "version": self.version,
            "seed": self.seed,
            "window": {
                "start": self.window_start,
                "end": self.window_end,
                "rows": self.training_rows,
            },
            "feature_columns": FEATURE_COLUMNS,
            "feature_scaler": self.feature_scaler.to_dict(),
            "target_scaler": self.target_scaler.to_dict(),
            "module_temp": self.module_temp.to_dict(),
            "ann": self.ann.to_dict(),
            "svm": self.svm.to_dict(),
            "cart": self.cart.to_dict(),
            "ensemble": {
                "weights": self.ensemble_weights,
                "validation_rrmse": self.validation_rrmse,
            },
        }

    def save(self, path) -> None:
        save_bundle(path, self.to_bundle())

    @classmethod
    def from_bundle(cls, bundle: dict) -> "TrainedModelSet":
        return cls(
            version=bundle["version"],
            seed=bundle["seed"],
            feature_scaler=MinMaxScaler.from_dict(bundle["feature_scaler"]),
            target_scaler=MinMaxScaler.from_dict(bundle["target_scaler"]),
            module_temp=QuadraticRegression.from_dict(bundle["module_temp"]),
            ann=NeuralNet.from_dict(bundle["ann"]),
            svm=SupportVectorRegressor.from_dict(bundle["svm"]),
            cart=RegressionTree.from_dict(bundle["cart"]),
            ensemble_weights=dict(bundle["ensemble"]["weights"]),
            validation_rrmse=dict(bundle["ensemble"]["validation_rrmse"]),
            window_start=bundle["window"]["start"],
            window_end=bundle["window"]["end"],
            training_rows=bundle["window"]["rows"],
        )

    @classmethod
    def load(cls, path) -> "TrainedModelSet":
        return cls.from_bundle(load_bundle(path))


def _subsample(n: int, cap: int) -> np.ndarray:
    """Deterministic even-stride row selection down to at most cap rows."""
    if n <= cap:
        return np.arange(n)
    return np.unique(np.linspace(0, n - 1, cap).round().astype(int))


def retrain(
    dataset: pd.DataFrame,
    config: AppConfig,
    as_of: datetime,
    window_days: int | None = None,
    seed: int | None = None,
) -> TrainedModelSet:
    """Fit the model family on the trailing window ending at ``as_of``."""
    settings = config.pipeline
    window_days = settings.retrain_window_days if window_days is None else window_days
    seed = settings.seed if seed is None else seed

    window = dataset.loc[(dataset.index > as_of - timedelta(days=window_days)) & (dataset.index <= as_of)]
    if window.empty:
        raise ValueError(f"no data in the {window_days}-day window ending {as_of}")
    span_days = (window.index.max() - window.index.min()) / timedelta(days=1)
    if span_days < settings.min_window_days:
        raise ValueError(
            f"training window covers only {span_days:.1f} days; "
            f"need at least {settings.min_window_days}"
        )

    rows = _subsample(len(window), settings.max_training_samples)
    sample = window.iloc[rows]
    features = sample[FEATURE_COLUMNS].to_numpy(dtype=float)
    target = sample[TARGET_COLUMN].to_numpy(dtype=float)

    # Time-ordered split: the validation tail weighs the ensemble members.
    n_val = max(1, int(round(len(sample) * settings.validation_fraction)))
    n_train = len(sample) - n_val
    if n_train < 2:
        raise ValueError("training window too small after the validation split")
    x_train, x_val = features[:n_train], features[n_train:]
    y_train, y_val = target[:n_train], target[n_train:]

    feature_scaler = MinMaxScaler(feature_names=FEATURE_COLUMNS).fit(x_train)
    target_scaler = MinMaxScaler(feature_names=[TARGET_COLUMN]).fit(y_train.reshape(-1, 1))
    xs_train = feature_scaler.transform(x_train)
    xs_val = feature_scaler.transform(x_val)
    ys_train = target_scaler.transform(y_train.reshape(-1, 1))[:, 0]
    ys_val = target_scaler.transform(y_val.reshape(-1, 1))[:, 0]

    ann = NeuralNet(
        widths=settings.ann.widths,
        learning_rate=settings.ann.learning_rate,
        batch_size=settings.ann.batch_size,
        max_epochs=settings.ann.max_epochs,
        patience=settings.ann.patience,
        min_rel_improvement=settings.ann.min_rel_improvement,
        seed=seed,
    ).fit(xs_train, ys_train, xs_val, ys_val)
    svr_rows = _subsample(len(xs_train), settings.svr.max_samples)
    svm = SupportVectorRegressor(
        c=settings.svr.c,
        epsilon=settings.svr.epsilon,
        gamma=settings.svr.gamma,
        tol=settings.svr.tol,
        max_iter=settings.svr.max_iter,
    ).fit(xs_train[svr_rows], y_train[svr_rows])
    cart = RegressionTree(
        max_depth=settings.cart.max_depth, min_leaf=settings.cart.min_leaf
    ).fit(xs_train, y_train)

    module_temp = QuadraticRegression().fit(
        sample["ambient_temp_f"].to_numpy(), sample["module_temp_f"].to_numpy()
    )

    version = as_of.strftime("%Y%m%dT%H%M")
    models = TrainedModelSet(
        version=version,
        seed=seed,
        feature_scaler=feature_scaler,
        target_scaler=target_scaler,
        module_temp=module_temp,
        ann=ann,
        svm=svm,
        cart=cart,
        ensemble_weights={},
        validation_rrmse={},
        window_start=window.index.min().isoformat(),
        window_end=window.index.max().isoformat(),
        training_rows=int(n_train),
    )
    val_predictions = {
        name: models.predict_member(name, x_val) for name in MEMBER_NAMES
    }
    models.ensemble_weights = inverse_rrmse_weights(val_predictions, y_val)
    models.validation_rrmse = {
        name: rrmse(y_val, p) for name, p in val_predictions.items()
    }
    return models


def model_path(models_dir, version: str) -> Path:
    return Path(models_dir) / f"model_{version}.json"


def rolling_retrain(
    dataset: pd.DataFrame,
    config: AppConfig,
    as_of_times: list[datetime],
    models_dir,
    window_days: int | None = None,
) -> list[Path]:
    """One persisted model version per retrain instant (e.g. one per day)."""
    models_dir = Path(models_dir)
    models_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for as_of in as_of_times:
        models = retrain(dataset, config, as_of, window_days=window_days)
        path = model_path(models_dir, models.version)
        models.save(path)
        paths.append(path)
    return paths
