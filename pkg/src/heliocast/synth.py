"""Synthetic measurement and NWP data with schema-compatible CSV output.

Irradiance is the site's clear-sky curve attenuated by a stochastic cloud
process plus multiplicative noise; module temperature follows ambient with
a quadratic law and an irradiance term; generation runs the attenuated
irradiance through the plant estimator. Everything is seeded, so fixtures
are reproducible.
"""

from __future__ import annotations

from datetime import datetime
from pathlib import Path

import numpy as np
import pandas as pd

from heliocast.geometry import clear_sky_for_index
from heliocast.pipeline.config import AppConfig
from heliocast.pipeline.ingest import (
    NWP_COLUMNS,
    PRODUCTION_COLUMNS,
    TIMESTAMP_COLUMN,
    WEATHER_COLUMNS,
)
from heliocast.plant import estimate_kw_ac

CLOUD_ATTENUATION = 0.72
DAY_REGIME_MEANS = (6.0, 35.0, 72.0)
DAY_REGIME_WEIGHTS = (0.5, 0.3, 0.2)


def _cloud_series(index: pd.DatetimeIndex, rng: np.random.Generator) -> np.ndarray:
    """Cloud cover in [0, 100]: per-day regime plus smooth AR(1) wandering."""
    days = pd.Series(index.date, index=index)
    unique_days = days.unique()
    regimes = rng.choice(DAY_REGIME_MEANS, size=len(unique_days), p=DAY_REGIME_WEIGHTS)
    day_mean = days.map(dict(zip(unique_days, regimes))).to_numpy()
    noise = np.empty(len(index))
    level = 0.0
    shocks = rng.normal(0.0, 4.0, size=len(index))
    for i, shock in enumerate(shocks):
        level = 0.92 * level + shock
        noise[i] = level
    return np.clip(day_mean + noise, 0.0, 100.0)


def _ambient_series(index: pd.DatetimeIndex, rng: np.random.Generator) -> np.ndarray:
    """Ambient temperature (deg F): seasonal + diurnal sinusoids + noise."""
    day_of_year = index.dayofyear.to_numpy()
    hour = index.hour.to_numpy() + index.minute.to_numpy() / 60.0
    seasonal = 77.0 + 9.0 * np.sin(2 * np.pi * (day_of_year - 100) / 365.0)
    diurnal = 7.0 * np.sin(2 * np.pi * (hour - 9.0) / 24.0)
    return seasonal + diurnal + rng.normal(0.0, 0.8, size=len(index))


def generate_frames(
    config: AppConfig,
    start: datetime,
    end: datetime,
    seed: int = 0,
    nwp_cloud_error_pct: float = 4.0,
    nwp_temp_error_f: float = 1.0,
    irradiance_noise: float = 0.05,
) -> dict[str, pd.DataFrame]:
    """Weather, production and NWP frames over [start, end)."""
    rng = np.random.default_rng(seed)
    step = config.pipeline.step_minutes
    index = pd.date_range(start, end, freq=f"{step}min", inclusive="left")

    ideal = clear_sky_for_index(config.site, index, step, config.use_equation_of_time)
    cloud = _cloud_series(index, rng)
    ambient_f = _ambient_series(index, rng)
    attenuation = 1.0 - CLOUD_ATTENUATION * (cloud / 100.0)
    irradiance = ideal * attenuation * (1.0 + irradiance_noise * rng.normal(size=len(index)))
    irradiance = np.clip(irradiance, 0.0, None)

    module_f = (
        4.0
        + 1.02 * ambient_f
        + 0.0006 * ambient_f**2
        + 0.016 * irradiance
        + rng.normal(0.0, 0.7, size=len(index))
    )
    module_c = (module_f - 32.0) / 1.8
    generation = estimate_kw_ac(config.plant, irradiance, module_c)
    generation = generation * (1.0 + 0.01 * rng.normal(size=len(index)))
    generation = np.clip(generation, 0.0, None)

    weather = pd.DataFrame(
        {
            "irradiance_wm2": irradiance,
            "ambient_temp_f": ambient_f,
            "module_temp_f": module_f,
            "cloud_cover_pct": cloud,
        },
        index=index,
    )
    production = pd.DataFrame({"generation_kw": generation}, index=index)

    hourly = pd.date_range(start, end, freq="1h", inclusive="left")
    cloud_hourly = weather["cloud_cover_pct"].reindex(hourly)
    ambient_hourly = weather["ambient_temp_f"].reindex(hourly)
    nwp = pd.DataFrame(
        {
            "ambient_temp_forecast_f": ambient_hourly
            + rng.normal(0.0, nwp_temp_error_f, size=len(hourly)),
            "cloud_cover_forecast_pct": np.clip(
                cloud_hourly + rng.normal(0.0, nwp_cloud_error_pct, size=len(hourly)), 0.0, 100.0
            ),
        },
        index=hourly,
    )
    return {"weather": weather, "production": production, "nwp": nwp}


def _write(frame: pd.DataFrame, columns: list[str], path: Path) -> None:
    out = frame.copy()
    out.insert(0, TIMESTAMP_COLUMN, pd.DatetimeIndex(out.index).strftime("%Y-%m-%dT%H:%M:%S"))
    out[columns].to_csv(path, index=False)


def generate_csv_files(
    config: AppConfig, start: datetime, end: datetime, out_dir, seed: int = 0, **kwargs
) -> dict[str, Path]:
    """Write weather.csv, production.csv and nwp.csv fixtures; returns paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    frames = generate_frames(config, start, end, seed=seed, **kwargs)
    paths = {
        "weather": out_dir / "weather.csv",
        "production": out_dir / "production.csv",
        "nwp": out_dir / "nwp.csv",
    }
    _write(frames["weather"], WEATHER_COLUMNS, paths["weather"])
    _write(frames["production"], PRODUCTION_COLUMNS, paths["production"])
    _write(frames["nwp"], NWP_COLUMNS, paths["nwp"])
    return paths
