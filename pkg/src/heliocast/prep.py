"""Cleaning, summary statistics, gap imputation and feature scaling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class SeriesStats:
    """Order statistics and moments of one series (population std dev)."""

    max: float
    min: float
    median: float
    mean: float
    std_dev: float
    count: int


def summarize(values) -> SeriesStats:
    """Summary statistics of the non-missing values of a series."""
    arr = np.asarray(pd.Series(values).dropna(), dtype=float)
    if arr.size == 0:
        raise ValueError("cannot summarize an empty series")
    return SeriesStats(
        max=float(arr.max()),
        min=float(arr.min()),
        median=float(np.median(arr)),
        mean=float(arr.mean()),
        std_dev=float(arr.std()),
        count=int(arr.size),
    )


def remove_outliers(values, n_sigma: float = 3.0, max_passes: int = 2):
    """Mark values beyond ``n_sigma`` standard deviations of the mean as missing.

    Statistics are recomputed after a removal pass, up to ``max_passes``
    times, so stragglers revealed by a tighter spread are also caught.
    Missing entries come back as NaN; the input is not modified.
    """
    series = pd.Series(values, dtype=float)
    if series.dropna().empty:
        raise ValueError("cannot clean an empty series")
    out = series.copy()
    for _ in range(max_passes):
        present = out.dropna()
        if present.empty:
            break
        mean = present.to_numpy().mean()
        std = present.to_numpy().std()
        if std == 0.0:
            break
        mask = (out - mean).abs() > n_sigma * std
        if not mask.any():
            break
        out[mask] = np.nan
    if isinstance(values, pd.Series):
        return out
    return out.to_numpy()


def impute(series: pd.Series, history: Mapping[int, pd.Series] | None = None) -> pd.Series:
    """Fill missing samples from other years, then forward/back fill.

    Each missing timestamp is first filled with the mean of the values at
    the same calendar slot (month, day, hour, minute) across the available
    years; remaining gaps are forward-filled, then back-filled. A series
    with no data at all cannot be filled and is rejected.
    """
    out = series.copy()
    index = pd.DatetimeIndex(out.index)
    if history is None:
        history = {int(year): out[index.year == year] for year in np.unique(index.year)}
    pooled = pd.concat(list(history.values())) if history else pd.Series(dtype=float)
    if not pooled.dropna().empty:
        pooled_idx = pd.DatetimeIndex(pooled.index)
        slot_means = pooled.groupby(
            [pooled_idx.month, pooled_idx.day, pooled_idx.hour, pooled_idx.minute]
        ).mean()
        missing = out.isna()
        if missing.any():
            miss_idx = index[missing]
            miss_keys = pd.MultiIndex.from_arrays(
                [miss_idx.month, miss_idx.day, miss_idx.hour, miss_idx.minute]
            )
            fills = slot_means.reindex(miss_keys).to_numpy()
            out.loc[missing] = fills
    out = out.ffill().bfill()
    if out.isna().any():
        raise ValueError("series has no data at all; gaps cannot be imputed")
    return out


class MinMaxScaler:
    """Per-feature min-max scaling learned from training data only.

    ``transform`` maps training data into [0, 1] and extrapolates beyond it
    for unseen values (no clipping).
    """

    def __init__(self, feature_names: list[str] | None = None):
        self.feature_names = feature_names
        self.data_min_: np.ndarray | None = None
        self.data_max_: np.ndarray | None = None

    def fit(self, matrix) -> "MinMaxScaler":
        data = np.atleast_2d(np.asarray(matrix, dtype=float))
        if data.size == 0:
            raise ValueError("cannot fit a scaler on an empty matrix")
        self.data_min_ = data.min(axis=0)
        self.data_max_ = data.max(axis=0)
        spans = self.data_max_ - self.data_min_
        for col in np.where(spans <= 0)[0]:
            name = self.feature_names[col] if self.feature_names else f"column {col}"
            raise ValueError(f"feature '{name}' is constant; min-max scaling undefined")
        return self

    def _check_fitted(self, data: np.ndarray):
        if self.data_min_ is None:
            raise ValueError("scaler has not been fitted")
        if data.shape[1] != self.data_min_.shape[0]:
            raise ValueError(
                f"expected {self.data_min_.shape[0]} features, got {data.shape[1]}"
            )

    def transform(self, matrix) -> np.ndarray:
        data = np.atleast_2d(np.asarray(matrix, dtype=float))
        self._check_fitted(data)
        return (data - self.data_min_) / (self.data_max_ - self.data_min_)

    def inverse_transform(self, matrix) -> np.ndarray:
        data = np.atleast_2d(np.asarray(matrix, dtype=float))
        self._check_fitted(data)
        return data * (self.data_max_ - self.data_min_) + self.data_min_

    def to_dict(self) -> dict:
        return {
            "feature_names": self.feature_names,
            "min": self.data_min_.tolist(),
            "max": self.data_max_.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "MinMaxScaler":
        scaler = cls(feature_names=payload.get("feature_names"))
        scaler.data_min_ = np.asarray(payload["min"], dtype=float)
        scaler.data_max_ = np.asarray(payload["max"], dtype=float)
        return scaler


def fit_scaler(matrix, feature_names: list[str] | None = None) -> MinMaxScaler:
    return MinMaxScaler(feature_names=feature_names).fit(matrix)


def transform(scaler: MinMaxScaler, matrix) -> np.ndarray:
    return scaler.transform(matrix)
