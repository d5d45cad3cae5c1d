"""Request/response models for the service endpoints.

The service and its clients share a filesystem (it is a single-site
operations tool), so requests carry file paths and responses report the
artifacts written plus summary figures.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    service: str
    version: str


class IngestRequest(BaseModel):
    weather_csv: str
    nwp_csv: str
    production_csv: str
    config: str
    out_dir: str


class IngestResponse(BaseModel):
    dataset_csv: str
    nwp_csv: str
    rows: int
    imputed_rows: int
    start: str
    end: str


class RetrainRequest(BaseModel):
    dataset_csv: str
    config: str
    as_of: str
    out_dir: str
    window_days: int | None = None
    seed: int | None = None


class RetrainResponse(BaseModel):
    model_file: str
    version: str
    training_rows: int
    ensemble_weights: dict[str, float]
    validation_rrmse: dict[str, float]


class ForecastRequest(BaseModel):
    model_file: str
    nwp_csv: str
    config: str
    issue_time: str
    horizon_hours: int = Field(default=24, ge=1)
    resolution: str = "15min"
    out_dir: str


class ForecastResponse(BaseModel):
    forecast_csv: str
    daily_csv: str
    steps: int
    model_version: str
    daily_irradiation_whm2: dict[str, float]


class BackcastRequest(BaseModel):
    dataset_csv: str
    model_file: str
    config: str
    out_dir: str
    nwp_csv: str | None = None


class BackcastResponse(BaseModel):
    backcast_csv: str
    gaps: list[list[str]]
    rows_filled: int


class EvaluateRequest(BaseModel):
    forecast_csv: str
    dataset_csv: str
    out_dir: str


class EvaluateResponse(BaseModel):
    report_json: str
    intraday: dict[str, dict[str, float]]
    daily: dict[str, dict[str, float]]


class SensitivityRequest(BaseModel):
    model_file: str
    dataset_csv: str
    out_dir: str
    model: str = "ann"
    n_samples: int = 10_000
    seed: int = 0


class SensitivityResponse(BaseModel):
    report_json: str
    first_order: dict[str, float]
    n_samples: int
    seed: int


class CorrelateRequest(BaseModel):
    dataset_csv: str
    out_dir: str


class CorrelateResponse(BaseModel):
    table_json: str
    correlations: dict[str, float]
