"""CSV ingestion: schema validation, cleaning, gap imputation, grid alignment.

All timestamps are local standard time, ISO-8601, on a fixed 15-minute grid
for measurements and an hourly grid for weather forecasts (NWP).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd

from heliocast.errors import SchemaError
from heliocast.geometry import clear_sky_for_index
from heliocast.pipeline.config import AppConfig
from heliocast.prep import impute, remove_outliers

TIMESTAMP_COLUMN = "timestamp_iso8601"
WEATHER_COLUMNS = [
    TIMESTAMP_COLUMN,
    "irradiance_wm2",
    "ambient_temp_f",
    "module_temp_f",
    "cloud_cover_pct",
]
NWP_COLUMNS = [TIMESTAMP_COLUMN, "ambient_temp_forecast_f", "cloud_cover_forecast_pct"]
PRODUCTION_COLUMNS = [TIMESTAMP_COLUMN, "generation_kw"]
DATASET_COLUMNS = [
    TIMESTAMP_COLUMN,
    "irradiance_wm2",
    "ideal_irradiance_wm2",
    "ambient_temp_f",
    "module_temp_f",
    "cloud_cover_pct",
    "generation_kw",
    "imputed",
    "backcast",
]
MEASURED_CHANNELS = [
    "irradiance_wm2",
    "ambient_temp_f",
    "module_temp_f",
    "cloud_cover_pct",
    "generation_kw",
]


def _read_csv(path, expected_columns: list[str]) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"{path}: file not found")
    raw = pd.read_csv(path, dtype=str, keep_default_na=False)
    if list(raw.columns) != expected_columns:
        raise SchemaError(
            f"{path}: header {list(raw.columns)} does not match the expected "
            f"columns {expected_columns}"
        )
    if raw.empty:
        raise SchemaError(f"{path}: no data rows")

    stamps = pd.to_datetime(raw[TIMESTAMP_COLUMN], format="ISO8601", errors="coerce")
    if stamps.isna().any():
        row = int(np.argmax(stamps.isna().to_numpy()))
        raise SchemaError(
            f"{path}: row {row + 2}: cannot parse timestamp "
            f"'{raw[TIMESTAMP_COLUMN].iloc[row]}'"
        )
    dupes = stamps[stamps.duplicated()]
    if not dupes.empty:
        raise SchemaError(f"{path}: duplicated timestamp {dupes.iloc[0].isoformat()}")

    frame = pd.DataFrame(index=pd.DatetimeIndex(stamps.values))
    for column in expected_columns[1:]:
        cells = raw[column].str.strip()
        values = pd.to_numeric(cells.replace("", np.nan), errors="coerce")
        bad = values.isna() & (cells != "")
        if bad.any():
            row = int(np.argmax(bad.to_numpy()))
            raise SchemaError(
                f"{path}: row {row + 2}: column '{column}': "
                f"cannot parse value '{cells.iloc[row]}'"
            )
        frame[column] = values.to_numpy()
    return frame.sort_index()


def _check_grid(frame: pd.DataFrame, path, step_minutes: int) -> None:
    index = pd.DatetimeIndex(frame.index)
    off_grid = (index.minute % step_minutes != 0) | (index.second != 0)
    if off_grid.any():
        bad = index[off_grid][0]
        raise SchemaError(
            f"{path}: timestamp {bad.isoformat()} is off the {step_minutes}-minute grid"
        )


def _check_cloud_range(frame: pd.DataFrame, path, column: str) -> None:
    values = frame[column]
    bad = values.notna() & ((values < 0) | (values > 100))
    if bad.any():
        ts = frame.index[bad][0]
        raise SchemaError(
            f"{path}: column '{column}': value {values[bad].iloc[0]} at "
            f"{ts.isoformat()} outside [0, 100]"
        )


def read_weather_csv(path, step_minutes: int = 15) -> pd.DataFrame:
    frame = _read_csv(path, WEATHER_COLUMNS)
    _check_grid(frame, path, step_minutes)
    _check_cloud_range(frame, path, "cloud_cover_pct")
    return frame


def read_nwp_csv(path) -> pd.DataFrame:
    frame = _read_csv(path, NWP_COLUMNS)
    _check_grid(frame, path, 60)
    _check_cloud_range(frame, path, "cloud_cover_forecast_pct")
    return frame


def read_production_csv(path, step_minutes: int = 15) -> pd.DataFrame:
    frame = _read_csv(path, PRODUCTION_COLUMNS)
    _check_grid(frame, path, step_minutes)
    return frame


def build_dataset(
    weather: pd.DataFrame, production: pd.DataFrame, config: AppConfig
) -> pd.DataFrame:
    """Outlier-clean, grid-align and impute measurements into one dataset.

    The result covers the full 15-minute grid spanned by the weather data,
    with the clear-sky ideal irradiance computed per step and an ``imputed``
    flag on every row that had at least one gap-filled cell.
    """
    step = config.pipeline.step_minutes
    grid = pd.date_range(weather.index.min(), weather.index.max(), freq=f"{step}min")
    frame = weather.reindex(grid)
    frame["generation_kw"] = production["generation_kw"].reindex(grid)

    for column in ["irradiance_wm2", "ambient_temp_f", "module_temp_f", "generation_kw"]:
        frame[column] = remove_outliers(frame[column])
    missing_before = frame[MEASURED_CHANNELS].isna().any(axis=1)
    for column in MEASURED_CHANNELS:
        frame[column] = impute(frame[column])
    frame["irradiance_wm2"] = frame["irradiance_wm2"].clip(lower=0.0)
    frame["generation_kw"] = frame["generation_kw"].clip(lower=0.0)
    frame["cloud_cover_pct"] = frame["cloud_cover_pct"].clip(lower=0.0, upper=100.0)

    frame["ideal_irradiance_wm2"] = clear_sky_for_index(
        config.site, grid, step, config.use_equation_of_time
    )
    frame["imputed"] = missing_before.astype(int)
    frame["backcast"] = 0
    return frame[[c for c in DATASET_COLUMNS if c != TIMESTAMP_COLUMN]]


def ingest(weather_csv, nwp_csv, production_csv, config: AppConfig):
    """Parse and clean the three input files; returns (dataset, nwp) frames."""
    weather = read_weather_csv(weather_csv, config.pipeline.step_minutes)
    nwp = read_nwp_csv(nwp_csv)
    production = read_production_csv(production_csv, config.pipeline.step_minutes)
    dataset = build_dataset(weather, production, config)
    return dataset, nwp


def _write_indexed_csv(frame: pd.DataFrame, path) -> None:
    out = frame.copy()
    out.insert(0, TIMESTAMP_COLUMN, pd.DatetimeIndex(out.index).strftime("%Y-%m-%dT%H:%M:%S"))
    out.to_csv(path, index=False)


def write_dataset_csv(dataset: pd.DataFrame, path) -> None:
    _write_indexed_csv(dataset, path)


def write_nwp_csv(nwp: pd.DataFrame, path) -> None:
    _write_indexed_csv(nwp, path)


def read_dataset_csv(path) -> pd.DataFrame:
    frame = _read_csv(path, DATASET_COLUMNS)
    frame["imputed"] = frame["imputed"].fillna(0).astype(int)
    frame["backcast"] = frame["backcast"].fillna(0).astype(int)
    return frame
