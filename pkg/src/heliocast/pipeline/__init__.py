"""File-driven forecasting pipeline: ingest, retrain, forecast, evaluate."""
