"""FastAPI application wrapping the forecasting pipeline."""

from __future__ import annotations

import json
from datetime import datetime
from pathlib import Path

import pandas as pd
from fastapi import FastAPI, HTTPException

from heliocast import __version__
from heliocast.errors import HeliocastError
from heliocast.metrics import correlation_table
from heliocast.pipeline import evaluate as evaluate_mod
from heliocast.pipeline import ingest as ingest_mod
from heliocast.pipeline.config import load_config
from heliocast.pipeline.forecast import ForecastJob, backcast, forecast
from heliocast.pipeline.train import FEATURE_COLUMNS, TrainedModelSet, model_path, retrain
from heliocast.sensitivity import sobol_first_order
from heliocast.service import schemas


def _fail(exc: Exception):
    raise HTTPException(status_code=400, detail=str(exc))


def _frame_with_timestamps(frame: pd.DataFrame) -> pd.DataFrame:
    out = frame.copy()
    out.insert(
        0,
        ingest_mod.TIMESTAMP_COLUMN,
        pd.DatetimeIndex(out.index).strftime("%Y-%m-%dT%H:%M:%S"),
    )
    return out


def create_app() -> FastAPI:
    app = FastAPI(
        title="heliocast",
        description="Solar irradiance and PV power forecasting service",
        version=__version__,
    )

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", service="heliocast", version=__version__)

    @app.post("/ingest", response_model=schemas.IngestResponse)
    def ingest(request: schemas.IngestRequest):
        try:
            config = load_config(request.config)
            dataset, nwp = ingest_mod.ingest(
                request.weather_csv, request.nwp_csv, request.production_csv, config
            )
        except (HeliocastError, ValueError, OSError) as exc:
            _fail(exc)
        out_dir = Path(request.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        dataset_csv = out_dir / "dataset.csv"
        nwp_csv = out_dir / "nwp.csv"
        ingest_mod.write_dataset_csv(dataset, dataset_csv)
        ingest_mod.write_nwp_csv(nwp, nwp_csv)
        return schemas.IngestResponse(
            dataset_csv=str(dataset_csv),
            nwp_csv=str(nwp_csv),
            rows=int(len(dataset)),
            imputed_rows=int(dataset["imputed"].sum()),
            start=dataset.index.min().isoformat(),
            end=dataset.index.max().isoformat(),
        )

    @app.post("/retrain", response_model=schemas.RetrainResponse)
    def retrain_endpoint(request: schemas.RetrainRequest):
        try:
            config = load_config(request.config)
            dataset = ingest_mod.read_dataset_csv(request.dataset_csv)
            as_of = datetime.fromisoformat(request.as_of)
            models = retrain(
                dataset, config, as_of, window_days=request.window_days, seed=request.seed
            )
        except (HeliocastError, ValueError, OSError) as exc:
            _fail(exc)
        models_dir = Path(request.out_dir) / "models"
        models_dir.mkdir(parents=True, exist_ok=True)
        path = model_path(models_dir, models.version)
        models.save(path)
        return schemas.RetrainResponse(
            model_file=str(path),
            version=models.version,
            training_rows=models.training_rows,
            ensemble_weights=models.ensemble_weights,
            validation_rrmse=models.validation_rrmse,
        )

    @app.post("/forecast", response_model=schemas.ForecastResponse)
    def forecast_endpoint(request: schemas.ForecastRequest):
        try:
            config = load_config(request.config)
            models = TrainedModelSet.load(request.model_file)
            nwp = ingest_mod.read_nwp_csv(request.nwp_csv)
            job = ForecastJob(
                site=config.site,
                plant=config.plant,
                issue_time=datetime.fromisoformat(request.issue_time),
                horizon_hours=request.horizon_hours,
                resolution=request.resolution,
            )
            series = forecast(job, models, nwp, config)
        except (HeliocastError, ValueError, OSError) as exc:
            _fail(exc)
        out_dir = Path(request.out_dir) / "forecasts"
        out_dir.mkdir(parents=True, exist_ok=True)
        tag = job.issue_time.strftime("%Y%m%dT%H%M")
        forecast_csv = out_dir / f"forecast_{tag}.csv"
        daily_csv = out_dir / f"forecast_daily_{tag}.csv"
        _frame_with_timestamps(series.frame).to_csv(forecast_csv, index=False)
        series.daily.to_csv(daily_csv)
        ensemble_daily = {
            str(day): float(val)
            for day, val in series.daily["irradiation_ensemble_whm2"].items()
        }
        return schemas.ForecastResponse(
            forecast_csv=str(forecast_csv),
            daily_csv=str(daily_csv),
            steps=int(len(series.frame)),
            model_version=series.model_version,
            daily_irradiation_whm2=ensemble_daily,
        )

    @app.post("/backcast", response_model=schemas.BackcastResponse)
    def backcast_endpoint(request: schemas.BackcastRequest):
        try:
            config = load_config(request.config)
            dataset = ingest_mod.read_dataset_csv(request.dataset_csv)
            models = TrainedModelSet.load(request.model_file)
            nwp = ingest_mod.read_nwp_csv(request.nwp_csv) if request.nwp_csv else None
            filled, gaps = backcast(dataset, models, config, nwp)
        except (HeliocastError, ValueError, OSError) as exc:
            _fail(exc)
        out_dir = Path(request.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        backcast_csv = out_dir / "backcast.csv"
        ingest_mod.write_dataset_csv(filled, backcast_csv)
        return schemas.BackcastResponse(
            backcast_csv=str(backcast_csv),
            gaps=[[start.isoformat(), end.isoformat()] for start, end in gaps],
            rows_filled=int(filled["backcast"].sum()),
        )

    @app.post("/evaluate", response_model=schemas.EvaluateResponse)
    def evaluate_endpoint(request: schemas.EvaluateRequest):
        try:
            dataset = ingest_mod.read_dataset_csv(request.dataset_csv)
            forecast_frame = pd.read_csv(request.forecast_csv)
            forecast_frame.index = pd.DatetimeIndex(
                pd.to_datetime(forecast_frame.pop(ingest_mod.TIMESTAMP_COLUMN), format="ISO8601")
            )
            out_dir = Path(request.out_dir) / "reports"
            report = evaluate_mod.emit_reports(forecast_frame, dataset, out_dir)
        except (HeliocastError, ValueError, OSError, KeyError) as exc:
            _fail(exc)
        return schemas.EvaluateResponse(
            report_json=str(out_dir / "metrics.json"),
            intraday=report["intraday"],
            daily=report["daily"],
        )

    @app.post("/sensitivity", response_model=schemas.SensitivityResponse)
    def sensitivity_endpoint(request: schemas.SensitivityRequest):
        try:
            dataset = ingest_mod.read_dataset_csv(request.dataset_csv)
            models = TrainedModelSet.load(request.model_file)
            features = dataset[FEATURE_COLUMNS].to_numpy(dtype=float)
            ranges = list(zip(features.min(axis=0), features.max(axis=0)))
            if request.model == "ensemble":
                predict = lambda m: models.predict_all(m)["ensemble"]  # noqa: E731
            else:
                predict = lambda m: models.predict_member(request.model, m)  # noqa: E731
            report = sobol_first_order(
                predict,
                ranges,
                n_samples=request.n_samples,
                seed=request.seed,
                names=FEATURE_COLUMNS,
            )
        except (HeliocastError, ValueError, OSError) as exc:
            _fail(exc)
        out_dir = Path(request.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        report_json = out_dir / f"sensitivity_{request.model}.json"
        report_json.write_text(json.dumps(report.as_dict(), indent=2, sort_keys=True))
        return schemas.SensitivityResponse(
            report_json=str(report_json),
            first_order=report.first_order,
            n_samples=report.n_samples,
            seed=report.seed,
        )

    @app.post("/correlate", response_model=schemas.CorrelateResponse)
    def correlate_endpoint(request: schemas.CorrelateRequest):
        try:
            dataset = ingest_mod.read_dataset_csv(request.dataset_csv)
            table = correlation_table(dataset)
        except (HeliocastError, ValueError, OSError) as exc:
            _fail(exc)
        out_dir = Path(request.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        table_json = out_dir / "correlation.json"
        table_json.write_text(json.dumps(table, indent=2, sort_keys=True))
        return schemas.CorrelateResponse(table_json=str(table_json), correlations=table)

    return app


app = create_app()
