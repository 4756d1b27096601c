"""Climate ingestion, synthesis and interpolation."""

import math

import pytest
from hypothesis import given, strategies as st

from trombe import (
    ClimateFormatError,
    ClimateSample,
    ClimateSeries,
    february_preset,
    load_climate_csv,
    synthesize_climate,
    write_climate_csv,
)

VALID_TWO_ROWS = "time_s,q_s_wm2,t_ambient_c\n0,0,1.5\n3600,250,2.0\n"


class TestLoad:
    def test_two_row_file(self, tmp_path):
        path = tmp_path / "ok.csv"
        path.write_text(VALID_TWO_ROWS, encoding="utf-8")
        series = load_climate_csv(path)
        assert len(series.samples) == 2
        assert series.samples[0].ambient == pytest.approx(274.65)
        assert series.samples[1].insolation == 250.0

    def test_negative_insolation_names_line(self, tmp_path):
        rows = ["time_s,q_s_wm2,t_ambient_c"]
        rows += [f"{i * 3600},{100 if i != 5 else -5},1.0" for i in range(8)]
        path = tmp_path / "bad.csv"
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        with pytest.raises(ClimateFormatError, match=r"bad\.csv:7"):
            load_climate_csv(path)

    def test_non_monotone_timestamps_rejected(self, tmp_path):
        path = tmp_path / "mono.csv"
        path.write_text(
            "time_s,q_s_wm2,t_ambient_c\n0,0,1\n3600,10,1\n1800,20,1\n",
            encoding="utf-8",
        )
        with pytest.raises(ClimateFormatError, match=r"mono\.csv:4"):
            load_climate_csv(path)

    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / "nohdr.csv"
        path.write_text("0,0,1.5\n3600,250,2.0\n", encoding="utf-8")
        with pytest.raises(ClimateFormatError, match="header"):
            load_climate_csv(path)

    def test_non_numeric_value_names_line(self, tmp_path):
        path = tmp_path / "text.csv"
        path.write_text(
            "time_s,q_s_wm2,t_ambient_c\n0,0,1\n3600,cloudy,2\n",
            encoding="utf-8",
        )
        with pytest.raises(ClimateFormatError, match=r"text\.csv:3"):
            load_climate_csv(path)

    def test_round_trip_is_stable(self, tmp_path):
        first = tmp_path / "first.csv"
        first.write_text(VALID_TWO_ROWS, encoding="utf-8")
        series = load_climate_csv(first)
        second = tmp_path / "second.csv"
        write_climate_csv(series, second)
        reloaded = load_climate_csv(second)
        assert reloaded.samples == series.samples
        third = tmp_path / "third.csv"
        write_climate_csv(reloaded, third)
        assert third.read_bytes() == second.read_bytes()


class TestSeriesInvariants:
    def test_gap_larger_than_cadence_rejected(self):
        samples = (
            ClimateSample(0.0, 0.0, 274.0),
            ClimateSample(3600.0, 0.0, 274.0),
            ClimateSample(10800.0, 0.0, 274.0),  # 2 h jump
        )
        with pytest.raises(ValueError, match="cadence"):
            ClimateSeries(samples=samples, cadence=3600.0)

    def test_single_sample_rejected(self):
        with pytest.raises(ValueError, match="two samples"):
            ClimateSeries(samples=(ClimateSample(0.0, 0.0, 274.0),),
                          cadence=3600.0)

    def test_interpolation_exact_at_samples(self):
        series = february_preset(1)
        for sample in series.samples[:5]:
            got = series.at(sample.time)
            assert got.insolation == sample.insolation
            assert got.ambient == sample.ambient

    @given(t=st.floats(min_value=0.0, max_value=23.0 * 3600.0))
    def test_interpolation_bounded_by_neighbours(self, t):
        series = february_preset(1)
        got = series.at(t)
        i = int(t // 3600.0)
        lo, hi = series.samples[i], series.samples[min(i + 1, 23)]
        assert min(lo.insolation, hi.insolation) - 1e-9 <= got.insolation \
            <= max(lo.insolation, hi.insolation) + 1e-9
        assert min(lo.ambient, hi.ambient) - 1e-9 <= got.ambient \
            <= max(lo.ambient, hi.ambient) + 1e-9

    def test_outside_coverage_rejected(self):
        series = february_preset(1)
        with pytest.raises(ValueError, match="coverage"):
            series.at(-1.0)
        with pytest.raises(ValueError, match="coverage"):
            series.at(series.samples[-1].time + 1.0)


class TestSynthesize:
    def test_zero_peak_gives_dark_series(self):
        series = synthesize_climate(days=2, peak_insolation=0.0,
                                    sunrise_hour=7, sunset_hour=17,
                                    t_mean=274.15, t_swing=8.0)
        assert all(s.insolation == 0.0 for s in series.samples)

    def test_one_day_hourly_has_24_samples(self):
        series = synthesize_climate(days=1, peak_insolation=600.0,
                                    sunrise_hour=7, sunset_hour=17,
                                    t_mean=274.15, t_swing=8.0)
        assert len(series.samples) == 24

    def test_daily_insolation_integral_matches_half_sine(self):
        # closed form: 2/pi * peak * daylight seconds = 13_750_987 J/m^2
        series = synthesize_climate(days=1, peak_insolation=600.0,
                                    sunrise_hour=7, sunset_hour=17,
                                    t_mean=274.15, t_swing=8.0, cadence=60.0)
        total = sum(s.insolation * 60.0 for s in series.samples)
        assert total == pytest.approx(2 / math.pi * 600.0 * 36000.0, rel=1e-3)

    def test_temperature_mean_and_swing(self):
        series = synthesize_climate(days=1, peak_insolation=600.0,
                                    sunrise_hour=7, sunset_hour=17,
                                    t_mean=274.15, t_swing=8.0, cadence=60.0)
        ambient = [s.ambient for s in series.samples]
        assert max(ambient) - min(ambient) == pytest.approx(8.0, rel=1e-3)
        assert sum(ambient) / len(ambient) == pytest.approx(274.15, abs=0.01)

    def test_temperature_peak_lags_solar_noon(self):
        series = synthesize_climate(days=1, peak_insolation=600.0,
                                    sunrise_hour=7, sunset_hour=17,
                                    t_mean=274.15, t_swing=8.0, cadence=60.0)
        ambient = [s.ambient for s in series.samples]
        insolation = [s.insolation for s in series.samples]
        noon_index = insolation.index(max(insolation))
        peak_index = ambient.index(max(ambient))
        lag_hours = (peak_index - noon_index) * 60.0 / 3600.0
        assert lag_hours == pytest.approx(2.0, abs=0.1)

    def test_sunset_before_sunrise_rejected(self):
        with pytest.raises(ValueError, match="sunset"):
            synthesize_climate(days=1, peak_insolation=600.0, sunrise_hour=17,
                               sunset_hour=7, t_mean=274.15, t_swing=8.0)

    def test_preset_satisfies_series_invariants(self):
        series = february_preset(7)
        assert len(series.samples) == 7 * 24
        assert series.cadence == 3600.0
        assert all(s.insolation >= 0.0 for s in series.samples)
