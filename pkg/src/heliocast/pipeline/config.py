"""The single config document: site, plant and scheduling knobs."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from heliocast.geometry import SiteLocation
from heliocast.plant import PlantConfig


@dataclass(frozen=True)
class CartSettings:
    max_depth: int = 8
    min_leaf: int = 5


@dataclass(frozen=True)
class AnnSettings:
    widths: tuple = (3, 32, 32, 16, 16, 8, 1)
    learning_rate: float = 0.01
    batch_size: int = 32
    max_epochs: int = 500
    patience: int = 2
    min_rel_improvement: float = 0.01


@dataclass(frozen=True)
class SvrSettings:
    # epsilon and the KKT tolerance are in target units (W/m^2)
    c: float = 1000.0
    epsilon: float = 0.1
    gamma: float | None = None
    tol: float = 0.5
    max_iter: int = 500_000
    # SMO cost grows superlinearly with training size; the SVR member trains
    # on an even-stride subsample of the window
    max_samples: int = 1500


@dataclass(frozen=True)
class PipelineSettings:
    step_minutes: int = 15
    retrain_window_days: int = 365
    min_window_days: int = 30
    validation_fraction: float = 0.1
    max_training_samples: int = 10_000
    clearsky_clamp_factor: float = 1.1
    issue_hour: int = 5
    seed: int = 7
    cart: CartSettings = field(default_factory=CartSettings)
    ann: AnnSettings = field(default_factory=AnnSettings)
    svr: SvrSettings = field(default_factory=SvrSettings)


@dataclass(frozen=True)
class AppConfig:
    site: SiteLocation
    plant: PlantConfig
    pipeline: PipelineSettings = field(default_factory=PipelineSettings)
    use_equation_of_time: bool = True

    def to_dict(self) -> dict:
        return {
            "site": asdict(self.site),
            "use_equation_of_time": self.use_equation_of_time,
            "plant": asdict(self.plant),
            "pipeline": asdict(self.pipeline),
        }


def default_config() -> AppConfig:
    """Miami canopy defaults (1.4 MW DC, Table-style derates)."""
    return AppConfig(
        site=SiteLocation(
            latitude_deg=25.76, longitude_deg=-80.36, elevation_ft=10.0, utc_offset_hours=-5.0
        ),
        plant=PlantConfig(
            dc_rating_kw=1400.0,
            ac_capacity_kw=1104.0,
            inverter_efficiency=0.98,
            soiling_derate=0.9,
            cabling_derate=0.99,
            mismatch_derate=0.97,
            temp_coefficient_pct_per_c=-0.5,
            module_temp_avg_c=25.0,
            tilt_deg=5.0,
            array_azimuth_deg=268.0,
            module_count=4480,
            inverter_count=46,
            strings=224,
            modules_per_string=20,
        ),
    )


def config_from_dict(payload: dict) -> AppConfig:
    pipe = dict(payload.get("pipeline", {}))
    cart = CartSettings(**pipe.pop("cart", {}))
    ann_raw = dict(pipe.pop("ann", {}))
    if "widths" in ann_raw:
        ann_raw["widths"] = tuple(ann_raw["widths"])
    ann = AnnSettings(**ann_raw)
    svr = SvrSettings(**pipe.pop("svr", {}))
    return AppConfig(
        site=SiteLocation(**payload["site"]),
        plant=PlantConfig(**payload["plant"]),
        pipeline=PipelineSettings(cart=cart, ann=ann, svr=svr, **pipe),
        use_equation_of_time=payload.get("use_equation_of_time", True),
    )


def load_config(path) -> AppConfig:
    payload = json.loads(Path(path).read_text())
    return config_from_dict(payload)


def write_config(path, config: AppConfig) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), indent=2, sort_keys=True))
