"""Power estimator and daily aggregation tests."""

from datetime import datetime

import numpy as np
import pandas as pd
import pytest

from heliocast.geometry import clear_sky_curve
from heliocast.plant import PlantConfig, daily_irradiation, estimate_kw_ac, estimate_series

from oracles import trapezoid_whm2

# product of the reference derates: 0.9 * 0.99 * 0.97 * 0.98
DERATE_PRODUCT = 0.9 * 0.99 * 0.97 * 0.98


class TestEstimateKwAc:
    def test_reference_point(self, reference_plant):
        # full-sun output at reference temperature is the derate product
        expected = 1400.0 * DERATE_PRODUCT
        assert estimate_kw_ac(reference_plant, 1000.0, 25.0) == pytest.approx(expected, abs=1e-9)
        assert expected == pytest.approx(1185.78, abs=0.01)

    def test_zero_irradiance(self, reference_plant):
        assert estimate_kw_ac(reference_plant, 0.0, 60.0) == 0.0

    def test_ten_degree_rise_costs_five_percent(self, reference_plant):
        base = estimate_kw_ac(reference_plant, 1000.0, 25.0)
        hot = estimate_kw_ac(reference_plant, 1000.0, 35.0)
        assert hot == pytest.approx(base * 0.95, rel=1e-12)

    def test_linear_in_irradiance(self, reference_plant):
        lo = estimate_kw_ac(reference_plant, 333.0, 30.0)
        hi = estimate_kw_ac(reference_plant, 666.0, 30.0)
        assert hi == pytest.approx(2 * lo, rel=1e-12)

    def test_monotone_decreasing_in_temperature(self, reference_plant):
        values = [estimate_kw_ac(reference_plant, 800.0, t) for t in range(25, 61, 5)]
        assert all(b < a for a, b in zip(values[:-1], values[1:]))

    def test_bounded_for_sub_stc_irradiance(self, reference_plant):
        bound = 1400.0 * DERATE_PRODUCT * (1 + 0.5 / 100 * 30)
        rng = np.random.default_rng(0)
        irr = rng.uniform(0, 1000, 200)
        temp = rng.uniform(-5, 55, 200)
        kw = estimate_kw_ac(reference_plant, irr, temp)
        assert (kw <= bound + 1e-9).all()

    def test_negative_irradiance_rejected(self, reference_plant):
        with pytest.raises(ValueError):
            estimate_kw_ac(reference_plant, -1.0, 25.0)

    def test_negative_bracket_floors_at_zero(self, reference_plant):
        # deep temperature derating cannot push output below zero
        assert estimate_kw_ac(reference_plant, 500.0, 25.0 + 250.0) == 0.0


class TestPlantConfig:
    def test_derate_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            PlantConfig(1400, 1104, 0.98, soiling_derate=1.2, cabling_derate=0.99, mismatch_derate=0.97)

    def test_ac_above_dc_rejected(self):
        with pytest.raises(ValueError):
            PlantConfig(1000, 1200, 0.98, 0.9, 0.99, 0.97)

    def test_derate_product(self, reference_plant):
        assert reference_plant.derate_product == pytest.approx(DERATE_PRODUCT, rel=1e-15)


class TestEstimateSeries:
    def test_hour_of_full_sun(self, reference_plant):
        index = pd.date_range(datetime(2021, 6, 1, 12, 0), periods=4, freq="15min")
        irr = pd.Series([1000.0] * 4, index=index)
        temp = pd.Series([25.0] * 4, index=index)
        result = estimate_series(reference_plant, irr, temp)
        energy = sum(result.daily_energy_kwh.values())
        assert energy == pytest.approx(1400.0 * DERATE_PRODUCT, abs=1e-9)

    def test_all_zero_day(self, reference_plant):
        index = pd.date_range(datetime(2021, 6, 1), periods=96, freq="15min")
        irr = pd.Series(0.0, index=index)
        temp = pd.Series(25.0, index=index)
        result = estimate_series(reference_plant, irr, temp)
        assert max(result.kw_ac) == 0.0
        assert sum(result.daily_energy_kwh.values()) == 0.0
        assert sum(result.daily_irradiation_whm2.values()) == 0.0

    def test_mismatched_timestamps_rejected(self, reference_plant):
        index_a = pd.date_range(datetime(2021, 6, 1), periods=4, freq="15min")
        index_b = index_a + pd.Timedelta(minutes=5)
        with pytest.raises(ValueError, match="diverge"):
            estimate_series(
                reference_plant,
                pd.Series(1.0, index=index_a),
                pd.Series(25.0, index=index_b),
            )


class TestDailyIrradiation:
    def test_constant_day(self):
        index = pd.date_range(datetime(2021, 6, 1), periods=96, freq="15min")
        per_day = daily_irradiation(pd.Series(400.0, index=index))
        assert per_day[index[0].date()] == pytest.approx(9600.0)

    def test_single_sample(self):
        index = pd.date_range(datetime(2021, 6, 1, 12), periods=1, freq="15min")
        per_day = daily_irradiation(pd.Series([1000.0], index=index))
        assert per_day[index[0].date()] == pytest.approx(250.0)

    def test_matches_trapezoid_oracle_on_clear_day(self, miami_site):
        curve = clear_sky_curve(miami_site, datetime(2021, 6, 21), datetime(2021, 6, 22), 15)
        per_day = daily_irradiation(curve.as_series())
        value = per_day[datetime(2021, 6, 21).date()]
        reference = trapezoid_whm2(list(curve.ghi_wm2), 15)
        assert value == pytest.approx(reference, rel=0.01)

    def test_nonuniform_cadence_rejected(self):
        index = pd.DatetimeIndex(
            [datetime(2021, 6, 1, 0, 0), datetime(2021, 6, 1, 0, 15), datetime(2021, 6, 1, 0, 45)]
        )
        with pytest.raises(ValueError, match="cadence"):
            daily_irradiation(pd.Series([1.0, 2.0, 3.0], index=index))
