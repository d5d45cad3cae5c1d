"""HTTP service exposing the forecasting pipeline."""

from heliocast.service.app import app, create_app

__all__ = ["app", "create_app"]
