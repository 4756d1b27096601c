"""Command-line interface: scenario runs, verification, order studies.

Commands
--------
``trombe run <scenario.ini> [--out DIR] [--days N] [--dt S] [--sigma W]``
    Simulate a scenario file and write ``timeseries.csv`` (node
    temperatures), ``energy.csv`` (flux record) and ``summary.txt``
    (daily totals and fixpoint statistics) into the output directory.

``trombe verify [--level quick|full]``
    Run the solver verification suite and print one PASS/FAIL line per
    property with the measured error.

``trombe converge [--problem slab]``
    Print error norms and observed orders of accuracy for time-step and
    mesh refinement on the sinusoidal slab problem.

Exit codes: 0 success, 1 validation error, 2 numerical failure
(non-convergence or singular system), 3 I/O error.

Scenario files are INI-style key/value text with sections ``wall``,
``glazing``, ``gap``, ``room``, ``numerics``, ``climate`` and ``output``;
every key is optional and falls back to the reference configuration (see
README for the full schema).  Command-line flags win over file values.
"""

from __future__ import annotations

import argparse
import configparser
import statistics
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from . import checks
from .climate import ClimateFormatError, ClimateSeries, february_preset, load_climate_csv
from .fdm import (
    GAP_AIR,
    GLASS_INNER,
    GLASS_OUTER,
    WALL_OUTER,
    Mesh,
    NumericsConfig,
    SingularSystemError,
    simulate,
)
from .model import GapSpec, GlazingSpec, RoomSpec, SystemSpec, WallSpec

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3

_TIMESERIES_HEADER = ("time_s,t_ambient_k,q_s_wm2,t_glass_outer_k,t_glass_inner_k,"
                      "t_gap_air_k,t_wall_outer_k,t_wall_mid_k,t_wall_inner_k")
_ENERGY_HEADER = ("time_s,q_loss_ambient_wm2,q_vent_gain_wm2,q_room_gain_wm2,"
                  "absorbed_solar_wm2,stored_rate_wm2")


class ConfigError(ValueError):
    """Scenario file problem; the message names file, section and key."""


@dataclass
class Scenario:
    """Parsed scenario: specs, numerics, climate and run horizon."""

    system: SystemSpec
    numerics: NumericsConfig
    wall_nodes: int
    climate: ClimateSeries
    spin_up_days: float
    report_days: float


# ---------------------------------------------------------------------------
# Scenario parsing
# ---------------------------------------------------------------------------

def _section_reader(parser: configparser.ConfigParser, path, section: str):
    def read(key: str, default, cast=float):
        if not parser.has_option(section, key):
            return default
        raw = parser.get(section, key)
        try:
            if cast is bool:
                return _parse_bool(raw)
            return cast(raw)
        except ValueError:
            raise ConfigError(
                f"{path}: [{section}] {key}: cannot parse {raw!r}"
            ) from None
    return read


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(raw)


def load_scenario(path) -> Scenario:
    """Read and validate a scenario file against the physical invariants."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"scenario file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None

    wall_r = _section_reader(parser, path, "wall")
    glazing_r = _section_reader(parser, path, "glazing")
    gap_r = _section_reader(parser, path, "gap")
    room_r = _section_reader(parser, path, "room")
    numerics_r = _section_reader(parser, path, "numerics")
    climate_r = _section_reader(parser, path, "climate")

    try:
        wall = WallSpec(
            height=wall_r("height", 3.0),
            width=wall_r("width", 3.5),
            thickness=wall_r("thickness", 0.3),
            conductivity=wall_r("conductivity", 1.4),
            density=wall_r("density", 2000.0),
            heat_capacity=wall_r("heat_capacity", 1000.0),
            absorptance_transmittance=wall_r("absorptance_transmittance", 0.75),
        )
        glazing = GlazingSpec(
            inter_pane_conductance=glazing_r("inter_pane_conductance", 6.0),
            glass_emissivity=glazing_r("glass_emissivity", 0.90),
            wall_surface_emissivity=glazing_r("wall_surface_emissivity", 0.95),
            exterior_convection=glazing_r("exterior_convection", 12.0),
            sky_coefficient=glazing_r("sky_coefficient", 0.0552),
        )
        gap = GapSpec(
            depth=gap_r("depth", 0.15),
            vent_area=gap_r("vent_area", 0.30),
            cross_section=gap_r("cross_section", wall.width * gap_r("depth", 0.15)),
            c1=gap_r("c1", 8.0),
            c2=gap_r("c2", 2.0),
            air_density=gap_r("air_density", 1.20),
            air_heat_capacity=gap_r("air_heat_capacity", 1005.0),
            vents_open=gap_r("vents_open", True, bool),
            still_air_coefficient=gap_r("still_air_coefficient", 3.0),
            velocity_coefficient=gap_r("velocity_coefficient", 4.0),
        )
        room = RoomSpec(
            air_temperature=room_r("air_temperature", 293.15),
            mean_radiant_temperature=room_r("mean_radiant_temperature", 293.15),
            convective_coefficient=room_r("convective_coefficient", 3.0),
            radiative_coefficient=room_r("radiative_coefficient", 5.0),
        )
        numerics = NumericsConfig(
            sigma=numerics_r("sigma", 0.5),
            dt=numerics_r("dt", 60.0),
            fixpoint_tol=numerics_r("fixpoint_tol", 1e-4),
            fixpoint_max_iter=numerics_r("fixpoint_max_iter", 50, int),
            under_relaxation=numerics_r("under_relaxation", 0.5),
            gap_nodes=numerics_r("gap_nodes", 50, int),
        )
        wall_nodes = numerics_r("wall_nodes", 31, int)
        if wall_nodes < 3:
            raise ValueError(f"wall_nodes must be >= 3, got {wall_nodes}")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None

    spin_up_days = climate_r("spin_up_days", 5.0)
    report_days = climate_r("days", 2.0)
    if spin_up_days < 0.0 or report_days < 0.0:
        raise ConfigError(f"{path}: [climate] horizons must be >= 0")
    source = climate_r("source", "february", str).strip()
    if source == "february":
        needed = int(spin_up_days + report_days) + 1
        climate = february_preset(max(needed, 1))
    else:
        csv_path = Path(source)
        if not csv_path.is_absolute():
            csv_path = path.parent / csv_path
        if not csv_path.exists():
            raise ConfigError(f"{path}: [climate] source: file not found: {csv_path}")
        climate = load_climate_csv(csv_path)

    return Scenario(
        system=SystemSpec(wall=wall, glazing=glazing, gap=gap, room=room),
        numerics=numerics,
        wall_nodes=wall_nodes,
        climate=climate,
        spin_up_days=spin_up_days,
        report_days=report_days,
    )


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------

def _write_outputs(out_dir: Path, records, scenario: Scenario, mesh: Mesh) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    climate = scenario.climate

    with open(out_dir / "timeseries.csv", "w", encoding="utf-8") as handle:
        handle.write(_TIMESERIES_HEADER + "\n")
        for state, _ in records:
            sample = climate.at(state.time)
            t = state.temperatures
            handle.write(
                f"{state.time:.1f},{sample.ambient:.6f},{sample.insolation:.6f},"
                f"{t[GLASS_OUTER]:.6f},{t[GLASS_INNER]:.6f},{t[GAP_AIR]:.6f},"
                f"{t[WALL_OUTER]:.6f},{t[mesh.wall_mid]:.6f},"
                f"{t[mesh.wall_inner]:.6f}\n"
            )

    with open(out_dir / "energy.csv", "w", encoding="utf-8") as handle:
        handle.write(_ENERGY_HEADER + "\n")
        for state, balance in records:
            stored = balance.stored_rate if balance.stored_rate is not None else 0.0
            handle.write(
                f"{state.time:.1f},{balance.ambient_loss:.6f},"
                f"{balance.vent_gain:.6f},{balance.room_gain:.6f},"
                f"{balance.absorbed_solar:.6f},{stored:.6f}\n"
            )

    with open(out_dir / "summary.txt", "w", encoding="utf-8") as handle:
        handle.write(_summary_text(records, scenario))


def _summary_text(records, scenario: Scenario) -> str:
    cfg = scenario.numerics
    lines = [
        "Trombe wall scenario summary",
        f"  wall: {scenario.system.wall.height:g} x {scenario.system.wall.width:g}"
        f" x {scenario.system.wall.thickness:g} m, {scenario.wall_nodes} nodes",
        f"  numerics: sigma={cfg.sigma:g}, dt={cfg.dt:g} s,"
        f" fixpoint tol={cfg.fixpoint_tol:g} K",
        f"  horizon: {scenario.spin_up_days:g} spin-up + {scenario.report_days:g}"
        f" report days",
        "",
    ]
    if not records:
        lines.append("no reported steps (zero-length reporting horizon)")
        return "\n".join(lines) + "\n"

    iterations = [state.iterations_used for state, _ in records]
    non_converged = sum(1 for state, _ in records if not state.converged)
    lines.append(
        f"fixpoint iterations per step: mean {statistics.fmean(iterations):.2f},"
        f" max {max(iterations)}; non-converged steps: {non_converged}"
    )

    day_seconds = 86400.0
    start = records[0][0].time
    day_totals: dict[int, dict[str, float]] = {}
    for state, balance in records:
        day = int((state.time - start) // day_seconds)
        bucket = day_totals.setdefault(
            day, {"absorbed": 0.0, "ambient": 0.0, "vent": 0.0, "room": 0.0}
        )
        bucket["absorbed"] += balance.absorbed_solar * cfg.dt
        bucket["ambient"] += balance.ambient_loss * cfg.dt
        bucket["vent"] += balance.vent_gain * cfg.dt
        bucket["room"] += balance.room_gain * cfg.dt

    lines.append("")
    lines.append("daily totals [MJ/m^2]: absorbed / ambient loss / vent gain / room gain")
    scale = 1e-6
    for day in sorted(day_totals):
        b = day_totals[day]
        lines.append(
            f"  day {day + 1}: {b['absorbed'] * scale:7.3f} /"
            f" {b['ambient'] * scale:7.3f} / {b['vent'] * scale:7.3f} /"
            f" {b['room'] * scale:7.3f}"
        )
    return "\n".join(lines) + "\n"


def cmd_run(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except (ConfigError, ClimateFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    if args.days is not None:
        scenario.report_days = args.days
    if args.dt is not None or args.sigma is not None:
        updates = {}
        if args.dt is not None:
            updates["dt"] = args.dt
        if args.sigma is not None:
            updates["sigma"] = args.sigma
        try:
            scenario.numerics = replace(scenario.numerics, **updates)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION

    mesh = Mesh.for_wall(scenario.system.wall, scenario.wall_nodes)
    try:
        records = simulate(
            scenario.system,
            scenario.numerics,
            scenario.climate,
            spin_up_days=scenario.spin_up_days,
            report_days=scenario.report_days,
            mesh=mesh,
        )
    except SingularSystemError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        _write_outputs(Path(args.out), records, scenario, mesh)
    except OSError as exc:
        print(f"i/o error writing {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO

    for state, _ in records:
        if not state.converged:
            print(
                f"numerical failure: fixpoint did not converge at t = "
                f"{state.time:.1f} s (first offending step)",
                file=sys.stderr,
            )
            return EXIT_NUMERICAL
    print(f"wrote {len(records)} steps to {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify / converge
# ---------------------------------------------------------------------------

def cmd_verify(args: argparse.Namespace) -> int:
    perturbation = 1.0 + args.inject_sweep_perturbation
    if args.level == "quick":
        results = checks.quick_suite(perturbation=perturbation)
    else:
        results = checks.full_suite(perturbation=perturbation)
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_NUMERICAL


def cmd_converge(args: argparse.Namespace) -> int:
    if args.problem != "slab":
        print(f"error: unknown problem {args.problem!r}", file=sys.stderr)
        return EXIT_VALIDATION
    print("sinusoidal-boundary slab, max-norm error after one period")
    for sigma in (0.5, 1.0):
        dts, errors, order = checks.temporal_study(sigma)
        print(f"\ntime-step refinement, sigma = {sigma:g} "
              f"(observed order {order:.2f})")
        print("  dt [s]      error [K]    ratio")
        previous = None
        for dt, err in zip(dts, errors):
            ratio = "" if previous is None else f"{previous / err:8.2f}"
            print(f"  {dt:8.1f}  {err:12.4e} {ratio}")
            previous = err
    dxs, errors, order = checks.spatial_study()
    print(f"\nmesh refinement, sigma = 0.5 (observed order {order:.2f})")
    print("  dx [m]      error [K]    ratio")
    previous = None
    for dx, err in zip(dxs, errors):
        ratio = "" if previous is None else f"{previous / err:8.2f}"
        print(f"  {dx:8.5f}  {err:12.4e} {ratio}")
        previous = err
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trombe",
        description="Transient thermal simulation of vented Trombe walls",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a scenario file")
    run.add_argument("scenario", help="path to the scenario INI file")
    run.add_argument("--out", default="out", help="output directory (default: out)")
    run.add_argument("--days", type=float, default=None,
                     help="override the reporting horizon [days]")
    run.add_argument("--dt", type=float, default=None,
                     help="override the solver time step [s]")
    run.add_argument("--sigma", type=float, default=None,
                     help="override the implicitness weight [0.5..1]")
    run.set_defaults(handler=cmd_run)

    verify = sub.add_parser("verify", help="run the verification suite")
    verify.add_argument("--level", choices=("quick", "full"), default="quick")
    verify.add_argument("--inject-sweep-perturbation", type=float, default=0.0,
                        help=argparse.SUPPRESS)  # test hook
    verify.set_defaults(handler=cmd_verify)

    converge = sub.add_parser("converge", help="observed-order study")
    converge.add_argument("--problem", default="slab")
    converge.set_defaults(handler=cmd_converge)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
