"""Solar irradiance forecasting and PV power estimation toolkit."""

__version__ = "0.1.0"

from heliocast.geometry import ClearSkyCurve, SiteLocation, SolarPosition, clear_sky_curve
from heliocast.plant import PlantConfig, PowerEstimate, estimate_kw_ac

__all__ = [
    "ClearSkyCurve",
    "PlantConfig",
    "PowerEstimate",
    "SiteLocation",
    "SolarPosition",
    "clear_sky_curve",
    "estimate_kw_ac",
    "__version__",
]
