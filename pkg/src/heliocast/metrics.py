"""Error metrics, correlation and diagnostic plot data."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
import pandas as pd

CORRELATION_VARIABLES = {
    "ideal_irradiance": "ideal_irradiance_wm2",
    "irradiance": "irradiance_wm2",
    "ambient_temp": "ambient_temp_f",
    "module_temp": "module_temp_f",
    "cloud_cover": "cloud_cover_pct",
}
GENERATION_COLUMN = "generation_kw"


@dataclass(frozen=True)
class MetricReport:
    mae: float
    mse: float
    rmse: float
    rrmse: float
    r_squared: float
    sample_count: int

    def as_dict(self) -> dict:
        return asdict(self)


def error_metrics(actual, predicted) -> MetricReport:
    """MAE, MSE, RMSE, RRMSE and R^2 of a prediction against truth.

    RRMSE divides the mean squared error by the raw sum of squared
    predictions (so it shrinks with sample count); R^2 uses the actual-mean
    baseline and may go negative.
    """
    y = np.asarray(actual, dtype=float).reshape(-1)
    yhat = np.asarray(predicted, dtype=float).reshape(-1)
    if y.shape[0] != yhat.shape[0]:
        raise ValueError("actual and predicted have different lengths")
    if y.shape[0] == 0:
        raise ValueError("cannot compute metrics of empty vectors")
    err = y - yhat
    mae = float(np.mean(np.abs(err)))
    mse = float(np.mean(err**2))
    rmse = float(np.sqrt(mse))
    pred_sq_sum = float(np.sum(yhat**2))
    if pred_sq_sum == 0.0:
        raise ValueError("RRMSE undefined: all predictions are zero")
    rrmse = float(np.sqrt(mse / pred_sq_sum))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(err**2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res == 0 else -np.inf)
    return MetricReport(
        mae=mae, mse=mse, rmse=rmse, rrmse=rrmse, r_squared=r_squared, sample_count=y.shape[0]
    )


def rrmse(actual, predicted) -> float:
    return error_metrics(actual, predicted).rrmse


def pearson(x, y) -> float:
    """Pearson product-moment correlation coefficient."""
    xs = np.asarray(x, dtype=float).reshape(-1)
    ys = np.asarray(y, dtype=float).reshape(-1)
    if xs.shape[0] != ys.shape[0]:
        raise ValueError("x and y have different lengths")
    if xs.shape[0] < 2:
        raise ValueError("need at least 2 samples")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    denom = np.sqrt(np.sum(dx**2)) * np.sqrt(np.sum(dy**2))
    if denom == 0.0:
        raise ValueError("correlation undefined for a constant input")
    return float(np.sum(dx * dy) / denom)


def correlation_table(dataset: pd.DataFrame) -> dict[str, float]:
    """Correlation of each solar variable against plant generation."""
    if GENERATION_COLUMN not in dataset.columns:
        raise ValueError(f"dataset is missing the '{GENERATION_COLUMN}' column")
    gen = dataset[GENERATION_COLUMN]
    table = {}
    for label, column in CORRELATION_VARIABLES.items():
        if column not in dataset.columns:
            raise ValueError(f"dataset is missing the '{column}' column")
        table[label] = pearson(dataset[column], gen)
    return table


def lag_plot_data(series, lag: int = 1) -> np.ndarray:
    """(x_t, x_{t+lag}) pairs of a series, in order; shape (n-lag, 2)."""
    values = np.asarray(series, dtype=float).reshape(-1)
    if lag < 1:
        raise ValueError("lag must be at least 1")
    if values.shape[0] <= lag:
        raise ValueError(f"series of length {values.shape[0]} too short for lag {lag}")
    return np.column_stack([values[:-lag], values[lag:]])


def hourly_error_distribution(actual, predicted, timestamps) -> dict[int, dict]:
    """Five-number summary of signed errors (predicted - actual) per hour of day.

    Quartiles use linear interpolation between order statistics; whiskers
    extend to the most extreme points within 1.5 IQR of the quartiles, and
    everything beyond is reported as outliers.
    """
    y = np.asarray(actual, dtype=float).reshape(-1)
    yhat = np.asarray(predicted, dtype=float).reshape(-1)
    index = pd.DatetimeIndex(timestamps)
    if not (len(y) == len(yhat) == len(index)):
        raise ValueError("actual, predicted and timestamps must be aligned")
    errors = yhat - y
    out: dict[int, dict] = {}
    hours = index.hour.to_numpy()
    for hour in sorted(np.unique(hours)):
        errs = errors[hours == hour]
        q1, median, q3 = np.quantile(errs, [0.25, 0.5, 0.75])
        iqr = q3 - q1
        lo_fence = q1 - 1.5 * iqr
        hi_fence = q3 + 1.5 * iqr
        inside = errs[(errs >= lo_fence) & (errs <= hi_fence)]
        outliers = errs[(errs < lo_fence) | (errs > hi_fence)]
        out[int(hour)] = {
            "count": int(errs.size),
            "median": float(median),
            "q1": float(q1),
            "q3": float(q3),
            "whisker_low": float(inside.min()),
            "whisker_high": float(inside.max()),
            "outliers": [float(v) for v in outliers],
        }
    return out
