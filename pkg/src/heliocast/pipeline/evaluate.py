"""Forecast evaluation: error tables, per-hour distributions, lag-plot data."""

from __future__ import annotations

import json
from pathlib import Path

import pandas as pd

from heliocast.metrics import error_metrics, hourly_error_distribution, lag_plot_data
from heliocast.pipeline.forecast import MODEL_SET


def _model_columns(forecast_frame: pd.DataFrame) -> list[str]:
    return [
        name for name in MODEL_SET if f"irradiance_{name}_wm2" in forecast_frame.columns
    ]


def evaluate(forecast_frame: pd.DataFrame, dataset: pd.DataFrame) -> dict:
    """Per-model intraday and daily-irradiation error metrics vs actuals."""
    actual = dataset["irradiance_wm2"]
    joined = forecast_frame.join(actual.rename("actual_wm2"), how="inner")
    if joined.empty:
        raise ValueError("forecast and actuals share no timestamps")
    models = _model_columns(forecast_frame)
    if not models:
        raise ValueError("forecast frame carries no irradiance model columns")

    index = pd.DatetimeIndex(joined.index)
    step_hours = (
        (index[1] - index[0]).total_seconds() / 3600.0 if len(index) > 1 else 0.25
    )
    report: dict = {"intraday": {}, "daily": {}}
    actual_daily = (
        pd.Series(joined["actual_wm2"].to_numpy() * step_hours, index=index)
        .groupby(index.date)
        .sum()
    )
    for name in models:
        predicted = joined[f"irradiance_{name}_wm2"]
        report["intraday"][name] = error_metrics(joined["actual_wm2"], predicted).as_dict()
        predicted_daily = (
            pd.Series(predicted.to_numpy() * step_hours, index=index).groupby(index.date).sum()
        )
        report["daily"][name] = error_metrics(actual_daily, predicted_daily).as_dict()
    report["sample_count"] = int(len(joined))
    report["days"] = int(len(actual_daily))
    return report


def emit_reports(forecast_frame: pd.DataFrame, dataset: pd.DataFrame, out_dir) -> dict:
    """Write the metric report plus plot-ready CSVs; returns the report."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = evaluate(forecast_frame, dataset)
    (out_dir / "metrics.json").write_text(json.dumps(report, indent=2, sort_keys=True))
    rows = [
        {"scope": scope, "model": model, **values}
        for scope in ("intraday", "daily")
        for model, values in report[scope].items()
    ]
    pd.DataFrame(rows).to_csv(out_dir / "metrics.csv", index=False)

    actual = dataset["irradiance_wm2"]
    joined = forecast_frame.join(actual.rename("actual_wm2"), how="inner")
    index = pd.DatetimeIndex(joined.index)
    for name in _model_columns(forecast_frame):
        predicted = joined[f"irradiance_{name}_wm2"]
        hourly = hourly_error_distribution(joined["actual_wm2"], predicted, index)
        rows = []
        for hour, stats in hourly.items():
            row = {"hour": hour, **stats}
            row["outliers"] = " ".join(f"{v:.6g}" for v in stats["outliers"])
            rows.append(row)
        pd.DataFrame(rows).to_csv(out_dir / f"hourly_error_{name}.csv", index=False)

        pairs = lag_plot_data(predicted.to_numpy())
        pd.DataFrame(pairs, columns=["value", "value_next"]).to_csv(
            out_dir / f"lag_{name}.csv", index=False
        )
    actual_pairs = lag_plot_data(joined["actual_wm2"].to_numpy())
    pd.DataFrame(actual_pairs, columns=["value", "value_next"]).to_csv(
        out_dir / "lag_actual.csv", index=False
    )
    return report
