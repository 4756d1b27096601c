"""Command-line interface: run, verify, converge, exit-code contract."""

import csv
import time

import pytest

from trombe.cli import (
    EXIT_IO,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VALIDATION,
    load_scenario,
    main,
)

MINIMAL_SCENARIO = """\
[climate]
source = february
spin_up_days = 0
days = 0.25

[numerics]
dt = 300
wall_nodes = 15
"""


@pytest.fixture()
def scenario_path(tmp_path):
    path = tmp_path / "scenario.ini"
    path.write_text(MINIMAL_SCENARIO, encoding="utf-8")
    return path


class TestRun:
    def test_writes_outputs_and_exits_zero(self, scenario_path, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["run", str(scenario_path), "--out", str(out)]) == EXIT_OK
        timeseries = (out / "timeseries.csv").read_text().splitlines()
        energy = (out / "energy.csv").read_text().splitlines()
        assert timeseries[0].startswith("time_s,t_ambient_k,q_s_wm2,t_glass_outer_k")
        assert energy[0].startswith("time_s,q_loss_ambient_wm2")
        steps = int(0.25 * 86400 / 300)
        assert len(timeseries) == steps + 1
        assert len(energy) == steps + 1
        summary = (out / "summary.txt").read_text()
        assert "fixpoint iterations" in summary
        assert "daily totals" in summary

    def test_outputs_are_deterministic(self, scenario_path, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        assert main(["run", str(scenario_path), "--out", str(out_a)]) == EXIT_OK
        assert main(["run", str(scenario_path), "--out", str(out_b)]) == EXIT_OK
        for name in ("timeseries.csv", "energy.csv", "summary.txt"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_zero_day_horizon_headers_only(self, scenario_path, tmp_path):
        out = tmp_path / "empty"
        assert main(["run", str(scenario_path), "--out", str(out),
                     "--days", "0"]) == EXIT_OK
        assert (out / "timeseries.csv").read_text().count("\n") == 1
        assert (out / "energy.csv").read_text().count("\n") == 1

    def test_flags_override_file(self, scenario_path, tmp_path):
        out = tmp_path / "flags"
        assert main(["run", str(scenario_path), "--out", str(out),
                     "--days", "0.05", "--dt", "600"]) == EXIT_OK
        lines = (out / "timeseries.csv").read_text().splitlines()
        assert len(lines) == int(0.05 * 86400 / 600) + 1

    def test_missing_scenario_is_validation_error(self, tmp_path, capsys):
        code = main(["run", str(tmp_path / "absent.ini")])
        assert code == EXIT_VALIDATION
        assert "absent.ini" in capsys.readouterr().err

    def test_missing_climate_file_names_path(self, tmp_path, capsys):
        path = tmp_path / "scenario.ini"
        path.write_text("[climate]\nsource = nowhere.csv\n", encoding="utf-8")
        code = main(["run", str(path)])
        assert code == EXIT_VALIDATION
        assert "nowhere.csv" in capsys.readouterr().err

    def test_bad_value_names_section_and_key(self, tmp_path, capsys):
        path = tmp_path / "scenario.ini"
        path.write_text("[wall]\nthickness = thick\n", encoding="utf-8")
        code = main(["run", str(path)])
        assert code == EXIT_VALIDATION
        err = capsys.readouterr().err
        assert "[wall] thickness" in err

    def test_invalid_physical_value_rejected(self, tmp_path, capsys):
        path = tmp_path / "scenario.ini"
        path.write_text("[wall]\nthickness = -0.3\n", encoding="utf-8")
        assert main(["run", str(path)]) == EXIT_VALIDATION

    def test_bad_sigma_flag_rejected(self, scenario_path, tmp_path):
        assert main(["run", str(scenario_path), "--out", str(tmp_path / "x"),
                     "--sigma", "0.2"]) == EXIT_VALIDATION

    def test_unwritable_output_is_io_error(self, scenario_path, tmp_path, capsys):
        blocker = tmp_path / "blocked"
        blocker.write_text("not a directory", encoding="utf-8")
        code = main(["run", str(scenario_path), "--out", str(blocker),
                     "--days", "0.01"])
        assert code == EXIT_IO
        assert "i/o error" in capsys.readouterr().err

    def test_nonconvergence_exits_numerical_with_timestamp(self, tmp_path, capsys):
        path = tmp_path / "strict.ini"
        path.write_text(
            "[climate]\nsource = february\nspin_up_days = 0\ndays = 0.02\n"
            "[numerics]\ndt = 300\nwall_nodes = 11\n"
            "fixpoint_tol = 1e-14\nfixpoint_max_iter = 1\n",
            encoding="utf-8",
        )
        code = main(["run", str(path), "--out", str(tmp_path / "out")])
        assert code == EXIT_NUMERICAL
        err = capsys.readouterr().err
        assert "did not converge at t = " in err

    def test_csv_climate_source(self, tmp_path):
        climate = tmp_path / "weather.csv"
        rows = ["time_s,q_s_wm2,t_ambient_c"]
        rows += [f"{i * 3600},{max(0, 300 - 50 * abs(i - 12))},2.0"
                 for i in range(25)]
        climate.write_text("\n".join(rows) + "\n", encoding="utf-8")
        path = tmp_path / "scenario.ini"
        path.write_text(
            f"[climate]\nsource = {climate.name}\nspin_up_days = 0\ndays = 0.5\n"
            "[numerics]\ndt = 600\nwall_nodes = 11\n",
            encoding="utf-8",
        )
        out = tmp_path / "out"
        assert main(["run", str(path), "--out", str(out)]) == EXIT_OK
        assert (out / "timeseries.csv").exists()


@pytest.fixture(scope="module")
def reference_out(tmp_path_factory):
    """One 5+2 day February run of the bundled reference configuration."""
    scenario = tmp_path_factory.mktemp("ref") / "reference.ini"
    scenario.write_text("[climate]\nsource = february\n", encoding="utf-8")
    out = tmp_path_factory.mktemp("ref-out")
    started = time.perf_counter()
    code = main(["run", str(scenario), "--out", str(out)])
    elapsed = time.perf_counter() - started
    return code, elapsed, out


class TestReferenceScenario:
    """End-to-end regression of the bundled reference configuration."""

    # frozen day-2 totals [MJ/m^2] of the 5+2 day February run at dt = 60 s
    DAY2_ABSORBED = 10.228277453773563
    DAY2_AMBIENT_LOSS = 6.911418763012417
    DAY2_VENT_GAIN = 1.483833118890201
    DAY2_ROOM_GAIN = 1.8297486435824915

    def test_runs_well_under_a_minute(self, reference_out):
        code, elapsed, _ = reference_out
        assert code == EXIT_OK
        assert elapsed < 60.0

    def test_summary_lists_flux_totals(self, reference_out):
        _, _, out = reference_out
        summary = (out / "summary.txt").read_text()
        assert "absorbed / ambient loss / vent gain / room gain" in summary
        assert "day 2" in summary

    def test_day_two_totals_frozen(self, reference_out):
        _, _, out = reference_out
        with open(out / "energy.csv", newline="") as handle:
            rows = list(csv.DictReader(handle))
        day = [r for r in rows
               if 86400.0 * 6 < float(r["time_s"]) <= 86400.0 * 7]
        dt = 60.0
        scale = dt * 1e-6
        absorbed = sum(float(r["absorbed_solar_wm2"]) for r in day) * scale
        ambient = sum(float(r["q_loss_ambient_wm2"]) for r in day) * scale
        vent = sum(float(r["q_vent_gain_wm2"]) for r in day) * scale
        room = sum(float(r["q_room_gain_wm2"]) for r in day) * scale
        assert absorbed == pytest.approx(self.DAY2_ABSORBED, rel=1e-5)
        assert ambient == pytest.approx(self.DAY2_AMBIENT_LOSS, rel=1e-5)
        assert vent == pytest.approx(self.DAY2_VENT_GAIN, rel=1e-5)
        assert room == pytest.approx(self.DAY2_ROOM_GAIN, rel=1e-5)

    def test_outputs_parse_back_as_csv(self, reference_out):
        _, _, out = reference_out
        with open(out / "timeseries.csv", newline="") as handle:
            reader = csv.DictReader(handle)
            assert reader.fieldnames == [
                "time_s", "t_ambient_k", "q_s_wm2", "t_glass_outer_k",
                "t_glass_inner_k", "t_gap_air_k", "t_wall_outer_k",
                "t_wall_mid_k", "t_wall_inner_k",
            ]
            first = next(reader)
            assert all(float(v) == float(v) for v in first.values())


class TestScenarioParsing:
    def test_defaults_applied(self, scenario_path):
        scenario = load_scenario(scenario_path)
        assert scenario.system.wall.thickness == 0.3
        assert scenario.system.wall.height == 3.0
        assert scenario.numerics.sigma == 0.5
        assert scenario.wall_nodes == 15

    def test_sections_override_defaults(self, tmp_path):
        path = tmp_path / "scenario.ini"
        path.write_text(
            "[wall]\nthickness = 0.4\nconductivity = 1.0\n"
            "[gap]\nvents_open = false\n"
            "[numerics]\nsigma = 1.0\n",
            encoding="utf-8",
        )
        scenario = load_scenario(path)
        assert scenario.system.wall.thickness == 0.4
        assert scenario.system.gap.vents_open is False
        assert scenario.numerics.sigma == 1.0


class TestVerify:
    def test_quick_level_passes_fast(self, capsys):
        started = time.perf_counter()
        code = main(["verify", "--level", "quick"])
        elapsed = time.perf_counter() - started
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert elapsed < 10.0
        assert "PASS sweep-vs-dense" in out
        assert "FAIL" not in out

    def test_injected_perturbation_fails_loudly(self, capsys):
        code = main(["verify", "--level", "quick",
                     "--inject-sweep-perturbation", "1e-6"])
        out = capsys.readouterr().out
        assert code == EXIT_NUMERICAL
        assert "FAIL sweep-vs-dense" in out


class TestConverge:
    def test_slab_study_prints_orders(self, capsys):
        assert main(["converge", "--problem", "slab"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "sigma = 0.5" in out and "sigma = 1" in out
        assert "mesh refinement" in out
        assert "observed order" in out

    def test_unknown_problem_rejected(self, capsys):
        assert main(["converge", "--problem", "sphere"]) == EXIT_VALIDATION
