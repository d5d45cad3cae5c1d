"""PV plant parameters and irradiance-to-power estimation."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class PlantConfig:
    """System parameters of a PV plant, including all derate factors.

    The combined derate product folds the inverter DC-to-AC conversion
    efficiency in with soiling, cabling and module mismatch losses.
    """

    dc_rating_kw: float
    ac_capacity_kw: float
    inverter_efficiency: float
    soiling_derate: float
    cabling_derate: float
    mismatch_derate: float
    temp_coefficient_pct_per_c: float = -0.5
    module_temp_avg_c: float = 25.0
    tilt_deg: float = 0.0
    array_azimuth_deg: float = 180.0
    module_count: int = 0
    inverter_count: int = 0
    strings: int = 0
    modules_per_string: int = 0

    def __post_init__(self):
        for name in ("inverter_efficiency", "soiling_derate", "cabling_derate", "mismatch_derate"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ValueError(f"{name} {value} outside (0, 1]")
        if self.dc_rating_kw <= 0:
            raise ValueError(f"dc_rating_kw {self.dc_rating_kw} must be positive")
        if self.ac_capacity_kw > self.dc_rating_kw:
            raise ValueError(
                f"ac_capacity_kw {self.ac_capacity_kw} exceeds dc rating {self.dc_rating_kw}"
            )

    @property
    def derate_product(self) -> float:
        return (
            self.soiling_derate
            * self.cabling_derate
            * self.mismatch_derate
            * self.inverter_efficiency
        )


@dataclass
class PowerEstimate:
    """Per-step AC power plus daily aggregates."""

    timestamps: pd.DatetimeIndex
    kw_ac: np.ndarray
    daily_irradiation_whm2: dict[date, float]
    daily_energy_kwh: dict[date, float]


def estimate_kw_ac(config: PlantConfig, irradiance_wm2, module_temp_c):
    """Estimated AC power in kW from irradiance and module temperature.

    Accepts scalars or aligned arrays. Output is floored at zero.
    """
    irr = np.asarray(irradiance_wm2, dtype=float)
    if (irr < 0).any():
        raise ValueError("irradiance must be non-negative")
    temp = np.asarray(module_temp_c, dtype=float)
    thermal = 1.0 + (config.temp_coefficient_pct_per_c / 100.0) * (temp - config.module_temp_avg_c)
    kw = config.dc_rating_kw * (irr / 1000.0) * thermal * config.derate_product
    kw = np.maximum(kw, 0.0)
    return float(kw) if kw.ndim == 0 else kw


def estimate_series(
    config: PlantConfig, irradiance: pd.Series, module_temp_c: pd.Series
) -> PowerEstimate:
    """Per-step power for two aligned series, with daily energy/irradiation."""
    if not irradiance.index.equals(module_temp_c.index):
        n = min(len(irradiance), len(module_temp_c))
        for k in range(n):
            if irradiance.index[k] != module_temp_c.index[k]:
                raise ValueError(
                    "irradiance/temperature timestamps diverge at position "
                    f"{k}: {irradiance.index[k]} vs {module_temp_c.index[k]}"
                )
        raise ValueError(
            f"irradiance/temperature series have different lengths "
            f"({len(irradiance)} vs {len(module_temp_c)})"
        )
    index = pd.DatetimeIndex(irradiance.index)
    if len(index) > 1:
        step_h = (index[1] - index[0]).total_seconds() / 3600.0
    else:
        step_h = 0.25
    kw = estimate_kw_ac(config, irradiance.to_numpy(), module_temp_c.to_numpy())
    kw = np.atleast_1d(kw)
    by_day_irr = pd.Series(irradiance.to_numpy() * step_h, index=index).groupby(index.date).sum()
    by_day_kwh = pd.Series(kw * step_h, index=index).groupby(index.date).sum()
    return PowerEstimate(
        timestamps=index,
        kw_ac=kw,
        daily_irradiation_whm2=by_day_irr.to_dict(),
        daily_energy_kwh=by_day_kwh.to_dict(),
    )


def daily_irradiation(irradiance: pd.Series) -> dict[date, float]:
    """Daily irradiation (Whr/m^2) from a 15-minute irradiance series."""
    index = pd.DatetimeIndex(irradiance.index)
    if len(index) > 1:
        deltas = np.diff(index.values).astype("timedelta64[s]").astype(int)
        if (deltas != 15 * 60).any():
            bad = int(np.argmax(deltas != 15 * 60))
            raise ValueError(
                f"series is not on a uniform 15-minute cadence (step after {index[bad]})"
            )
    per_day = pd.Series(irradiance.to_numpy() * 0.25, index=index).groupby(index.date).sum()
    return per_day.to_dict()
