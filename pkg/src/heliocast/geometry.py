"""Solar position and clear-sky global horizontal irradiance (GHI).

Conventions: all public angles are degrees. The hour angle is positive
before solar noon (15 degrees per hour), the azimuth is measured from due
south and is positive toward the east. The model is only valid for
northern-hemisphere, non-polar sites; :class:`SiteLocation` enforces that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date, datetime, timedelta

import numpy as np
import pandas as pd

DEGREES_PER_HOUR = 15.0
DECLINATION_AMPLITUDE_DEG = 23.45
ARCTIC_CIRCLE_LAT_DEG = 66.56
MIN_GREGORIAN_YEAR = 1583

# Quintic fit of clear-day GHI (W/m^2) against the mean solar altitude angle
# over a sampling step, highest degree first.
GHI_POLY_COEFFS = (-4.72e-7, 1.15e-4, -1.15e-2, 4.78e-1, 8.31, -0.079)

WEATHER_CSV_COLUMNS = [
    "timestamp_iso8601",
    "irradiance_wm2",
    "ambient_temp_f",
    "module_temp_f",
    "cloud_cover_pct",
]


@dataclass(frozen=True)
class SiteLocation:
    """A fixed observation site.

    ``latitude_deg`` must lie in (0, 66.56]: the position model assumes a
    northern-hemisphere observer and its day/night handling breaks down
    past the arctic circle.
    """

    latitude_deg: float
    longitude_deg: float
    elevation_ft: float = 0.0
    utc_offset_hours: float = 0.0

    def __post_init__(self):
        if not -180.0 <= self.longitude_deg <= 180.0:
            raise ValueError(f"longitude {self.longitude_deg} outside [-180, 180]")
        if self.latitude_deg <= 0.0:
            raise ValueError(
                f"latitude {self.latitude_deg} not supported: site must be in the "
                "northern hemisphere (latitude > 0)"
            )
        if self.latitude_deg > ARCTIC_CIRCLE_LAT_DEG:
            raise ValueError(
                f"latitude {self.latitude_deg} not supported: polar sites (beyond "
                f"{ARCTIC_CIRCLE_LAT_DEG} deg) are outside the model's validity"
            )
        if not -12.0 <= self.utc_offset_hours <= 14.0:
            raise ValueError(f"utc offset {self.utc_offset_hours} outside [-12, 14]")


@dataclass(frozen=True)
class SolarPosition:
    """Sun geometry for one site and instant."""

    julian_date: float
    day_of_year: int
    declination_deg: float
    hour_angle_deg: float
    altitude_deg: float
    azimuth_deg: float


def julian_date(year: int, month: int, day: int, fractional_day: float = 0.0) -> float:
    """Julian date of a Gregorian calendar date plus a fraction of a day.

    ``fractional_day`` is hours+minutes expressed as a fraction in [0, 1);
    0.0 is midnight, 0.5 is noon.
    """
    if not 0.0 <= fractional_day < 1.0:
        raise ValueError(f"fractional_day {fractional_day} outside [0, 1)")
    if year < MIN_GREGORIAN_YEAR:
        raise ValueError(f"year {year} precedes the Gregorian calendar")
    try:
        date(year, month, day)
    except ValueError as exc:
        raise ValueError(f"invalid calendar date {year}-{month:02d}-{day:02d}: {exc}") from None

    # January and February count as months 13 and 14 of the previous year.
    if month <= 2:
        year -= 1
        month += 12
    century_correction = 2 - year // 100 + year // 400
    jd = (
        math.floor(365.25 * (year + 4716))
        + math.floor(30.6001 * (month + 1))
        + day
        + century_correction
        - 1524.5
    )
    return jd + fractional_day


def declination(day_of_year: int) -> float:
    """Solar declination in degrees for a day of the year (1..366)."""
    if not 1 <= day_of_year <= 366:
        raise ValueError(f"day_of_year {day_of_year} outside 1..366")
    return DECLINATION_AMPLITUDE_DEG * math.sin(math.radians(360.0 / 365.0 * (day_of_year - 81)))


def hour_angle(hours_before_solar_noon: float) -> float:
    """Hour angle in degrees; positive before solar noon."""
    return DEGREES_PER_HOUR * hours_before_solar_noon


def altitude(latitude_deg: float, declination_deg: float, hour_angle_deg: float) -> float:
    """Altitude angle of the sun in degrees; negative below the horizon."""
    if not 0.0 < latitude_deg < 90.0:
        raise ValueError(f"latitude {latitude_deg} outside (0, 90)")
    lat = math.radians(latitude_deg)
    dec = math.radians(declination_deg)
    ha = math.radians(hour_angle_deg)
    sin_alt = math.cos(lat) * math.cos(dec) * math.cos(ha) + math.sin(lat) * math.sin(dec)
    return math.degrees(math.asin(min(1.0, max(-1.0, sin_alt))))


def azimuth(
    latitude_deg: float,
    declination_deg: float,
    hour_angle_deg: float,
    altitude_deg: float,
) -> float:
    """Azimuth of the sun in degrees from due south, positive toward east.

    The arcsine branch is disambiguated by the morning/afternoon test on
    cos(H) vs tan(declination)/tan(latitude): when it fails, the sun is more
    than 90 degrees from south and the angle is reflected accordingly.
    """
    cos_alt = math.cos(math.radians(altitude_deg))
    if abs(altitude_deg) >= 90.0 or abs(cos_alt) < 1e-12:
        raise ValueError(
            f"azimuth undefined at altitude {altitude_deg} deg (sun at zenith/nadir)"
        )
    sin_az = (
        math.cos(math.radians(declination_deg))
        * math.sin(math.radians(hour_angle_deg))
        / cos_alt
    )
    az = math.degrees(math.asin(min(1.0, max(-1.0, sin_az))))
    boundary = math.tan(math.radians(declination_deg)) / math.tan(math.radians(latitude_deg))
    if math.cos(math.radians(hour_angle_deg)) < boundary:
        az = math.copysign(180.0 - abs(az), az)
    return az


def clear_sky_ghi(altitude_now_deg: float, altitude_next_deg: float) -> float:
    """Clear-sky GHI in W/m^2 over one step, from the step's mean altitude.

    Zero whenever the mean altitude is at or below the horizon, and floored
    at zero where the polynomial dips negative.
    """
    mean_alt = 0.5 * (altitude_now_deg + altitude_next_deg)
    if mean_alt <= 0.0:
        return 0.0
    value = 0.0
    for c in GHI_POLY_COEFFS:
        value = value * mean_alt + c
    return max(0.0, value)


def equation_of_time(day_of_year: int) -> float:
    """Equation-of-time correction in minutes (standard approximation)."""
    if not 1 <= day_of_year <= 366:
        raise ValueError(f"day_of_year {day_of_year} outside 1..366")
    b = math.radians(360.0 / 365.0 * (day_of_year - 81))
    return 9.87 * math.sin(2 * b) - 7.53 * math.cos(b) - 1.5 * math.sin(b)


def solar_noon_clock_hours(
    site: SiteLocation, day_of_year: int, use_equation_of_time: bool = True
) -> float:
    """Clock time of solar noon (hours, local standard time).

    Solar noon shifts from 12:00 by 4 minutes per degree of longitude away
    from the timezone meridian, plus the equation-of-time term (optional).
    """
    correction_min = 4.0 * (site.longitude_deg - DEGREES_PER_HOUR * site.utc_offset_hours)
    if use_equation_of_time:
        correction_min += equation_of_time(day_of_year)
    return 12.0 - correction_min / 60.0


def solar_position(
    site: SiteLocation, when: datetime, use_equation_of_time: bool = True
) -> SolarPosition:
    """Full solar geometry for a site at a local-standard-time instant."""
    day_of_year = when.timetuple().tm_yday
    clock_hours = when.hour + when.minute / 60.0 + when.second / 3600.0
    jd = julian_date(when.year, when.month, when.day, clock_hours / 24.0)
    dec = declination(day_of_year)
    noon = solar_noon_clock_hours(site, day_of_year, use_equation_of_time)
    ha = hour_angle(noon - clock_hours)
    alt = altitude(site.latitude_deg, dec, ha)
    az = azimuth(site.latitude_deg, dec, ha, alt)
    return SolarPosition(
        julian_date=jd,
        day_of_year=day_of_year,
        declination_deg=dec,
        hour_angle_deg=ha,
        altitude_deg=alt,
        azimuth_deg=az,
    )


@dataclass
class ClearSkyCurve:
    """Clear-sky GHI sampled on a uniform time grid."""

    timestamps: pd.DatetimeIndex
    ghi_wm2: np.ndarray
    step_minutes: int

    def __post_init__(self):
        self.timestamps = pd.DatetimeIndex(self.timestamps)
        self.ghi_wm2 = np.asarray(self.ghi_wm2, dtype=float)
        if len(self.timestamps) != len(self.ghi_wm2):
            raise ValueError("timestamps and values have different lengths")
        if self.step_minutes <= 0:
            raise ValueError("step_minutes must be positive")
        if len(self.timestamps) > 1:
            deltas = np.diff(self.timestamps.values).astype("timedelta64[s]").astype(int)
            if (deltas <= 0).any():
                raise ValueError("timestamps must be strictly increasing")
            if (deltas != self.step_minutes * 60).any():
                raise ValueError("timestamps must be uniformly spaced by step_minutes")
        if (self.ghi_wm2 < 0).any():
            raise ValueError("clear-sky GHI must be non-negative")

    def as_series(self) -> pd.Series:
        return pd.Series(self.ghi_wm2, index=self.timestamps, name="ideal_irradiance_wm2")

    def to_weather_frame(
        self, ambient_temp_f: float = 77.0, module_temp_f: float = 77.0, cloud_cover_pct: float = 0.0
    ) -> pd.DataFrame:
        """Render the curve in the weather CSV schema (irradiance = clear sky)."""
        return pd.DataFrame(
            {
                "timestamp_iso8601": self.timestamps.strftime("%Y-%m-%dT%H:%M:%S"),
                "irradiance_wm2": self.ghi_wm2,
                "ambient_temp_f": ambient_temp_f,
                "module_temp_f": module_temp_f,
                "cloud_cover_pct": cloud_cover_pct,
            },
            columns=WEATHER_CSV_COLUMNS,
        )

    def to_weather_csv(self, path, **kwargs) -> None:
        self.to_weather_frame(**kwargs).to_csv(path, index=False)


def _altitude_array(site: SiteLocation, index: pd.DatetimeIndex, use_eot: bool) -> np.ndarray:
    """Vectorized altitude for a timestamp grid (degrees)."""
    day_of_year = index.dayofyear.to_numpy()
    clock_hours = (
        index.hour.to_numpy() + index.minute.to_numpy() / 60.0 + index.second.to_numpy() / 3600.0
    )
    dec = np.radians(
        DECLINATION_AMPLITUDE_DEG * np.sin(np.radians(360.0 / 365.0 * (day_of_year - 81)))
    )
    correction_min = 4.0 * (site.longitude_deg - DEGREES_PER_HOUR * site.utc_offset_hours)
    if use_eot:
        b = np.radians(360.0 / 365.0 * (day_of_year - 81))
        correction_min = correction_min + (
            9.87 * np.sin(2 * b) - 7.53 * np.cos(b) - 1.5 * np.sin(b)
        )
    noon = 12.0 - correction_min / 60.0
    ha = np.radians(DEGREES_PER_HOUR * (noon - clock_hours))
    lat = math.radians(site.latitude_deg)
    sin_alt = np.cos(lat) * np.cos(dec) * np.cos(ha) + math.sin(lat) * np.sin(dec)
    return np.degrees(np.arcsin(np.clip(sin_alt, -1.0, 1.0)))


def clear_sky_curve(
    site: SiteLocation,
    start: datetime,
    end: datetime,
    step_minutes: int = 15,
    use_equation_of_time: bool = True,
) -> ClearSkyCurve:
    """Clear-sky GHI on [start, end) at a fixed step.

    Each sample covers one step and uses the mean of the altitudes at the
    step's two endpoints.
    """
    if start >= end:
        raise ValueError("start must precede end")
    if step_minutes <= 0:
        raise ValueError("step_minutes must be positive")
    span_s = (end - start).total_seconds()
    step_s = step_minutes * 60
    if span_s % step_s != 0:
        raise ValueError(f"step of {step_minutes} min does not divide the range evenly")
    n_steps = int(span_s // step_s)
    index = pd.date_range(start, periods=n_steps + 1, freq=timedelta(minutes=step_minutes))
    alts = _altitude_array(site, index, use_equation_of_time)
    mean_alt = 0.5 * (alts[:-1] + alts[1:])
    ghi = np.where(mean_alt <= 0.0, 0.0, np.polyval(GHI_POLY_COEFFS, mean_alt))
    ghi = np.maximum(ghi, 0.0)
    return ClearSkyCurve(timestamps=index[:-1], ghi_wm2=ghi, step_minutes=step_minutes)


def clear_sky_for_index(
    site: SiteLocation, index: pd.DatetimeIndex, step_minutes: int, use_equation_of_time: bool = True
) -> np.ndarray:
    """Clear-sky GHI for an arbitrary (not necessarily contiguous) 15-min grid index."""
    index = pd.DatetimeIndex(index)
    alt_now = _altitude_array(site, index, use_equation_of_time)
    alt_next = _altitude_array(site, index + timedelta(minutes=step_minutes), use_equation_of_time)
    mean_alt = 0.5 * (alt_now + alt_next)
    ghi = np.where(mean_alt <= 0.0, 0.0, np.polyval(GHI_POLY_COEFFS, mean_alt))
    return np.maximum(ghi, 0.0)
