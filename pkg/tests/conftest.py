"""Shared fixtures: the reference site/plant and a small synthetic workspace."""

from __future__ import annotations

from datetime import datetime

import pytest

from heliocast.geometry import SiteLocation
from heliocast.pipeline.config import AppConfig, default_config
from heliocast.pipeline.ingest import build_dataset
from heliocast.pipeline.train import retrain
from heliocast.plant import PlantConfig
from heliocast.synth import generate_frames


@pytest.fixture(scope="session")
def miami_site() -> SiteLocation:
    return SiteLocation(latitude_deg=25.76, longitude_deg=-80.36, elevation_ft=10.0, utc_offset_hours=-5.0)


@pytest.fixture(scope="session")
def reference_plant() -> PlantConfig:
    return PlantConfig(
        dc_rating_kw=1400.0,
        ac_capacity_kw=1104.0,
        inverter_efficiency=0.98,
        soiling_derate=0.9,
        cabling_derate=0.99,
        mismatch_derate=0.97,
        temp_coefficient_pct_per_c=-0.5,
        module_temp_avg_c=25.0,
    )


@pytest.fixture(scope="session")
def app_config() -> AppConfig:
    return default_config()


@pytest.fixture(scope="session")
def synth_frames(app_config):
    """75 days of synthetic measurements plus NWP (15-minute grid)."""
    return generate_frames(app_config, datetime(2020, 1, 1), datetime(2020, 3, 16), seed=3)


@pytest.fixture(scope="session")
def synth_dataset(app_config, synth_frames):
    return build_dataset(synth_frames["weather"], synth_frames["production"], app_config)


@pytest.fixture(scope="session")
def trained_models(app_config, synth_dataset):
    return retrain(synth_dataset, app_config, datetime(2020, 3, 10), window_days=60)
