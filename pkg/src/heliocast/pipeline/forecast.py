"""Forecast issuance, clamping, backcasting and the no-lookahead guard."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta

import numpy as np
import pandas as pd

from heliocast.errors import LookaheadError
from heliocast.geometry import SiteLocation, clear_sky_for_index
from heliocast.pipeline.config import AppConfig
from heliocast.pipeline.train import MEMBER_NAMES, TrainedModelSet
from heliocast.plant import PlantConfig, estimate_kw_ac

MAX_HORIZON_HOURS = 7 * 24
RESOLUTIONS = ("15min", "hourly")
MODEL_SET = MEMBER_NAMES + ("ensemble",)


@dataclass(frozen=True)
class ForecastJob:
    site: SiteLocation
    plant: PlantConfig
    issue_time: datetime
    horizon_hours: int = 24
    resolution: str = "15min"
    retrain_window_days: int = 365
    model_set: tuple = MODEL_SET

    def __post_init__(self):
        if not 1 <= self.horizon_hours <= MAX_HORIZON_HOURS:
            raise ValueError(
                f"horizon of {self.horizon_hours} h outside 1..{MAX_HORIZON_HOURS} "
                "(at most one week ahead)"
            )
        if self.resolution not in RESOLUTIONS:
            raise ValueError(f"resolution '{self.resolution}' not one of {RESOLUTIONS}")
        unknown = set(self.model_set) - set(MODEL_SET)
        if unknown:
            raise ValueError(f"unknown models in model_set: {sorted(unknown)}")


@dataclass
class ForecastSeries:
    frame: pd.DataFrame
    daily: pd.DataFrame
    model_version: str
    issue_time: datetime
    resolution: str


class FencedFrame:
    """Read guard over historical data: any access past the fence raises.

    The forecast path receives history only through this wrapper, so a
    future-data read anywhere in that path trips :class:`LookaheadError`.
    """

    def __init__(self, frame: pd.DataFrame, fence: datetime):
        self._frame = frame
        self.fence = fence

    def slice(self, start=None, end=None) -> pd.DataFrame:
        end = self._frame.index.max() if end is None else end
        if pd.Timestamp(end) > pd.Timestamp(self.fence):
            raise LookaheadError(
                f"attempted to read history up to {end}, past the issue time {self.fence}"
            )
        frame = self._frame
        if start is not None:
            frame = frame.loc[frame.index >= start]
        return frame.loc[frame.index <= end]


def _audit_history_inputs(history: FencedFrame | None, index: pd.DatetimeIndex) -> None:
    """All history reads on the forecast path go through here, fenced.

    The legitimate path reads nothing beyond the fence; a mutation that
    requests later rows trips :class:`LookaheadError`.
    """
    if history is not None:
        history.slice(end=history.fence)


def interpolate_nwp(nwp: pd.DataFrame, index: pd.DatetimeIndex) -> pd.DataFrame:
    """Hourly NWP onto a 15-minute grid: temperature linearly, cloud step-held.

    Every hour touched by the target grid must be present; missing hours are
    reported, not interpolated over.
    """
    needed = pd.date_range(index.min().floor("h"), index.max().floor("h"), freq="1h")
    missing = needed.difference(nwp.index)
    if len(missing):
        listed = ", ".join(ts.isoformat() for ts in missing[:8])
        more = "" if len(missing) <= 8 else f" (+{len(missing) - 8} more)"
        raise ValueError(f"NWP is missing {len(missing)} hour(s) in the horizon: {listed}{more}")
    hourly = nwp.loc[needed]
    # Temperature interpolation needs the next hour as the right endpoint.
    edge = needed.max() + timedelta(hours=1)
    if edge in nwp.index:
        hourly = pd.concat([hourly, nwp.loc[[edge]]])
    ambient = (
        hourly["ambient_temp_forecast_f"]
        .reindex(hourly.index.union(index))
        .interpolate("time")
        .ffill()
    )
    cloud = hourly["cloud_cover_forecast_pct"].reindex(hourly.index.union(index)).ffill()
    return pd.DataFrame(
        {"ambient_temp_f": ambient.loc[index], "cloud_cover_pct": cloud.loc[index]}, index=index
    )


def fahrenheit_to_celsius(values):
    return (np.asarray(values, dtype=float) - 32.0) / 1.8


def _predict_steps(
    models: TrainedModelSet,
    site: SiteLocation,
    index: pd.DatetimeIndex,
    nwp_steps: pd.DataFrame,
    config: AppConfig,
) -> tuple[dict[str, np.ndarray], np.ndarray, np.ndarray]:
    """Per-model irradiance over a 15-min index driven by NWP inputs."""
    step = config.pipeline.step_minutes
    ideal = clear_sky_for_index(site, index, step, config.use_equation_of_time)
    module_temp_f = models.module_temp.predict(nwp_steps["ambient_temp_f"].to_numpy())
    features = np.column_stack([ideal, nwp_steps["cloud_cover_pct"].to_numpy(), module_temp_f])
    predictions = models.predict_all(features)
    ceiling = config.pipeline.clearsky_clamp_factor * ideal
    for name, values in predictions.items():
        predictions[name] = np.clip(values, 0.0, ceiling)
    return predictions, ideal, module_temp_f


def forecast(
    job: ForecastJob,
    models: TrainedModelSet,
    nwp: pd.DataFrame,
    config: AppConfig | None = None,
    history: FencedFrame | None = None,
) -> ForecastSeries:
    """Issue a forecast from ``job.issue_time`` over the job's horizon.

    Only NWP inputs, the clear-sky model and the trained models are
    consulted; any history access is fenced at the issue time.
    """
    if config is None:
        config = AppConfig(site=job.site, plant=job.plant)
    if history is not None and not isinstance(history, FencedFrame):
        history = FencedFrame(history, job.issue_time)

    step = config.pipeline.step_minutes
    index = pd.date_range(
        job.issue_time,
        job.issue_time + timedelta(hours=job.horizon_hours),
        freq=f"{step}min",
        inclusive="left",
    )
    _audit_history_inputs(history, index)
    nwp_steps = interpolate_nwp(nwp, index)
    predictions, ideal, module_temp_f = _predict_steps(models, job.site, index, nwp_steps, config)

    frame = pd.DataFrame(index=index)
    frame["ideal_irradiance_wm2"] = ideal
    for name in job.model_set:
        frame[f"irradiance_{name}_wm2"] = predictions[name]
    frame["module_temp_f"] = module_temp_f
    frame["kw_ac"] = estimate_kw_ac(
        job.plant, predictions["ensemble"], fahrenheit_to_celsius(module_temp_f)
    )
    frame["model_version"] = models.version
    frame["issue_time"] = job.issue_time.isoformat()

    step_hours = step / 60.0
    day_index = index.date
    daily = pd.DataFrame(
        {
            f"irradiation_{name}_whm2": pd.Series(
                predictions[name] * step_hours, index=index
            ).groupby(day_index).sum()
            for name in job.model_set
        }
    )
    daily.index.name = "date"

    if job.resolution == "hourly":
        numeric = frame.drop(columns=["model_version", "issue_time"])
        frame = numeric.resample("1h").mean()
        frame["model_version"] = models.version
        frame["issue_time"] = job.issue_time.isoformat()
    return ForecastSeries(
        frame=frame,
        daily=daily,
        model_version=models.version,
        issue_time=job.issue_time,
        resolution=job.resolution,
    )


def find_gaps(dataset: pd.DataFrame, column: str = "irradiance_wm2") -> list[tuple]:
    """Contiguous runs of missing values, as (start, end) timestamp pairs."""
    missing = dataset[column].isna().to_numpy()
    gaps = []
    start = None
    for ts, is_missing in zip(dataset.index, missing):
        if is_missing and start is None:
            start = ts
        elif not is_missing and start is not None:
            gaps.append((start, prev))
            start = None
        prev = ts
    if start is not None:
        gaps.append((start, dataset.index[-1]))
    return gaps


def backcast(
    dataset: pd.DataFrame,
    models: TrainedModelSet,
    config: AppConfig,
    nwp: pd.DataFrame | None = None,
) -> tuple[pd.DataFrame, list[tuple]]:
    """Fill irradiance gaps by running the forecaster over them.

    Weather inputs over the gap come from recorded cloud cover and module
    temperature when present, else from historical NWP. Filled rows are
    flagged in the ``backcast`` column.
    """
    gaps = find_gaps(dataset)
    out = dataset.copy()
    if not gaps:
        return out, gaps
    for start, end in gaps:
        rows = out.loc[start:end]
        index = pd.DatetimeIndex(rows.index)
        recorded_ok = (
            not rows["cloud_cover_pct"].isna().any() and not rows["module_temp_f"].isna().any()
        )
        if recorded_ok:
            ideal = clear_sky_for_index(
                config.site, index, config.pipeline.step_minutes, config.use_equation_of_time
            )
            features = np.column_stack(
                [ideal, rows["cloud_cover_pct"].to_numpy(), rows["module_temp_f"].to_numpy()]
            )
            predictions = models.predict_all(features)
            ceiling = config.pipeline.clearsky_clamp_factor * ideal
            filled = np.clip(predictions["ensemble"], 0.0, ceiling)
        elif nwp is not None:
            nwp_steps = interpolate_nwp(nwp, index)
            predictions, ideal, _ = _predict_steps(models, config.site, index, nwp_steps, config)
            filled = predictions["ensemble"]
        else:
            raise ValueError(
                f"gap {start.isoformat()}..{end.isoformat()} has no recorded weather "
                "and no NWP was provided"
            )
        out.loc[start:end, "irradiance_wm2"] = filled
        out.loc[start:end, "backcast"] = 1
    return out, gaps
