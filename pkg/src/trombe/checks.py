"""Verification checks shared by the command-line ``verify``/``converge``
commands and the test suite.

Each check exercises one falsifiable property of the solver against an
independent route: the extended sweep against dense elimination on
randomized systems, the time stepper against exact equilibria and the
steady resistance network, the slab scheme against the periodic
conduction solution (observed orders of accuracy), the two channel
formulations against each other, and the flux bookkeeping against the
stored-energy difference over a full synthetic day.

Checks return :class:`CheckResult` records; they do not raise on a failed
property so a runner can report every outcome.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass, replace

import numpy as np

from . import fdm, oracle
from .airgap import march_gap_profile, solve_gap_algebraic
from .climate import february_preset
from .fdm import (
    GAP_AIR,
    GLASS_INNER,
    GLASS_OUTER,
    WALL_OUTER,
    BoundaryData,
    Forcing,
    Mesh,
    NumericsConfig,
    ThermalState,
    back_substitute,
    close_inner_surface,
    forward_sweep,
    time_step,
)
from .model import (
    CoefficientSet,
    GapSpec,
    GlazingSpec,
    RoomSpec,
    SystemSpec,
    WallSpec,
    build_coefficients,
    reference_system,
)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verification check."""

    name: str
    passed: bool
    measured: float
    limit: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name}: measured {self.measured:.3e} "
                f"(limit {self.limit:.3e}) {self.detail}".rstrip())


# ---------------------------------------------------------------------------
# Randomized single-solve systems
# ---------------------------------------------------------------------------

def random_linear_system(rng: np.random.Generator):
    """One randomized solver instance in physical coefficient ranges.

    Returns (state, bc, coeffs, system, cfg, mesh) ready for a single
    linear solve.  Both the sigma weight and the previous-level
    coefficient set are randomized so the explicit terms are exercised.
    """
    wall_nodes = int(rng.integers(3, 41))
    wall = WallSpec(
        height=rng.uniform(2.0, 4.0),
        width=rng.uniform(2.0, 5.0),
        thickness=rng.uniform(0.1, 0.5),
        conductivity=rng.uniform(0.5, 2.5),
        density=rng.uniform(800.0, 2400.0),
        heat_capacity=rng.uniform(700.0, 1500.0),
        absorptance_transmittance=rng.uniform(0.5, 0.95),
    )
    gap = GapSpec(depth=rng.uniform(0.08, 0.25),
                  vent_area=rng.uniform(0.15, 0.5),
                  cross_section=rng.uniform(0.3, 1.0))
    glazing = GlazingSpec()
    room = RoomSpec(
        air_temperature=rng.uniform(288.0, 298.0),
        mean_radiant_temperature=rng.uniform(288.0, 298.0),
        convective_coefficient=rng.uniform(1.0, 5.0),
        radiative_coefficient=rng.uniform(2.0, 8.0),
    )
    system = SystemSpec(wall=wall, glazing=glazing, gap=gap, room=room)
    mesh = Mesh.for_wall(wall, wall_nodes)

    def random_coeffs() -> CoefficientSet:
        velocity = float(rng.uniform(0.0, 1.0)) if rng.random() < 0.8 else 0.0
        return CoefficientSet(
            h_gap_convective=rng.uniform(1.0, 10.0),
            h_gap_radiative=rng.uniform(1.0, 8.0),
            h_panes=rng.uniform(2.0, 10.0),
            h_exterior_convective=rng.uniform(5.0, 25.0),
            h_exterior_radiative=rng.uniform(2.0, 8.0),
            h_room_convective=room.convective_coefficient,
            h_room_radiative=room.radiative_coefficient,
            velocity=velocity,
            volume_flow=velocity * gap.cross_section,
        )

    state = ThermalState(
        time=0.0,
        temperatures=rng.uniform(260.0, 360.0, size=mesh.node_count),
        coeffs=random_coeffs(),
    )
    t_ambient = rng.uniform(255.0, 310.0)
    bc = BoundaryData(
        current=Forcing(q_solar=rng.uniform(0.0, 800.0), t_ambient=t_ambient,
                        t_sky=rng.uniform(230.0, t_ambient)),
        previous=Forcing(q_solar=rng.uniform(0.0, 800.0), t_ambient=t_ambient,
                         t_sky=rng.uniform(230.0, t_ambient)),
    )
    cfg = NumericsConfig(sigma=rng.uniform(0.5, 1.0), dt=rng.uniform(10.0, 3600.0))
    return state, bc, random_coeffs(), system, cfg, mesh


def check_sweep_vs_dense(
    n_systems: int = 100,
    seed: int = 20240211,
    perturbation: float = 1.0,
    limit: float = 1e-9,
) -> CheckResult:
    """Extended sweep vs dense elimination over randomized single solves.

    ``perturbation`` scales one mid-sweep alpha coefficient (a test hook:
    any value other than 1 must make the check fail loudly).
    """
    rng = np.random.default_rng(seed)
    started = _time.perf_counter()
    worst = 0.0
    for _ in range(n_systems):
        state, bc, coeffs, system, cfg, mesh = random_linear_system(rng)
        sweep = forward_sweep(state, bc, coeffs, system, cfg, mesh)
        if perturbation != 1.0:
            alpha = sweep.alpha.copy()
            alpha[mesh.wall_mid] *= perturbation
            sweep = replace(sweep, alpha=alpha)
        t_inner = close_inner_surface(sweep, state, coeffs, system, cfg, mesh)
        solved = back_substitute(sweep, t_inner, mesh)
        reference = oracle.dense_step(state, bc, coeffs, system, cfg, mesh)
        worst = max(worst, float(np.max(np.abs(solved - reference))))
    elapsed = _time.perf_counter() - started
    return CheckResult(
        name="sweep-vs-dense",
        passed=worst < limit,
        measured=worst,
        limit=limit,
        detail=f"[{n_systems} random systems, {elapsed:.2f} s]",
    )


# ---------------------------------------------------------------------------
# Equilibrium and steady state
# ---------------------------------------------------------------------------

def equilibrium_setup(t_uniform: float = 293.15):
    """System, config, mesh and forcing for an exact global equilibrium.

    The sky coefficient is retuned so the derived sky temperature equals
    the uniform temperature, making ambient, sky, room and the initial
    field identical.
    """
    base = reference_system()
    system = SystemSpec(
        wall=base.wall,
        glazing=GlazingSpec(sky_coefficient=1.0 / math.sqrt(t_uniform)),
        gap=base.gap,
        room=RoomSpec(air_temperature=t_uniform, mean_radiant_temperature=t_uniform),
    )
    cfg = NumericsConfig()
    mesh = Mesh.for_wall(system.wall)
    forcing = Forcing(q_solar=0.0, t_ambient=t_uniform, t_sky=t_uniform)
    return system, cfg, mesh, forcing


def check_equilibrium_fixpoint(
    steps: int = 1000, limit: float = 1e-12
) -> CheckResult:
    """Uniform zero-forcing state must reproduce itself step after step."""
    t_uniform = 293.15
    system, cfg, mesh, forcing = equilibrium_setup(t_uniform)
    coeffs = build_coefficients(system, t_uniform, t_uniform, t_uniform,
                                t_uniform, 0.0, True)
    state = ThermalState(time=0.0,
                         temperatures=np.full(mesh.node_count, t_uniform),
                         coeffs=coeffs)
    bc = BoundaryData(current=forcing, previous=forcing)
    single_iteration = True
    for _ in range(steps):
        state = time_step(state, bc, system, cfg, mesh)
        single_iteration = single_iteration and state.iterations_used == 1
    drift = float(np.max(np.abs(state.temperatures - t_uniform))) / steps
    return CheckResult(
        name="equilibrium-fixpoint",
        passed=drift < limit and single_iteration,
        measured=drift,
        limit=limit,
        detail=f"[{steps} steps, K/step; single fixpoint iteration: {single_iteration}]",
    )


def steady_scenario():
    """Constant-boundary scenario (no sun, vents closed, sky at ambient)."""
    t_ambient = 273.15
    base = reference_system()
    system = SystemSpec(
        wall=base.wall,
        glazing=GlazingSpec(sky_coefficient=1.0 / math.sqrt(t_ambient)),
        gap=replace(base.gap, vents_open=False),
        room=base.room,
    )
    forcing = Forcing(q_solar=0.0, t_ambient=t_ambient, t_sky=t_ambient)
    return system, forcing


def run_to_steady(
    system: SystemSpec,
    forcing: Forcing,
    mesh: Mesh,
    dt: float = 50000.0,
    max_steps: int = 2000,
    drift_tol: float = 1e-13,
) -> ThermalState:
    """March with large fully implicit steps until the field stops moving."""
    cfg = NumericsConfig(sigma=1.0, dt=dt, fixpoint_tol=1e-12,
                         fixpoint_max_iter=200)
    t0 = forcing.t_ambient
    coeffs = build_coefficients(system, t0, t0, t0, forcing.t_sky, 0.0,
                                system.gap.vents_open_at(0.0))
    state = ThermalState(time=0.0,
                         temperatures=np.full(mesh.node_count, t0),
                         coeffs=coeffs)
    bc = BoundaryData(current=forcing, previous=forcing)
    for _ in range(max_steps):
        new_state = time_step(state, bc, system, cfg, mesh)
        drift = float(np.max(np.abs(new_state.temperatures - state.temperatures)))
        state = new_state
        if drift < drift_tol:
            break
    return state


def check_steady_profile(limit: float = 1e-6) -> CheckResult:
    """Converged constant-boundary run vs the exact resistance network.

    Measures the worst of: deviation of the wall interior from the line
    through its surface temperatures [K], relative flux-continuity
    residual across every interface, and mismatch against the analytic
    steady profile [K].
    """
    system, forcing = steady_scenario()
    mesh = Mesh.for_wall(system.wall)
    state = run_to_steady(system, forcing, mesh)
    t = state.temperatures
    c = state.coeffs
    wall = system.wall
    room = system.room

    # wall interior linearity
    x = mesh.wall_x()
    t_wall = t[WALL_OUTER:]
    line = t_wall[0] + (t_wall[-1] - t_wall[0]) * x / wall.thickness
    linearity = float(np.max(np.abs(t_wall - line)))

    # interface flux continuity
    flux_exterior = (
        c.h_exterior_convective * (t[GLASS_OUTER] - forcing.t_ambient)
        + c.h_exterior_radiative * (t[GLASS_OUTER] - forcing.t_sky)
    )
    flux_panes = c.h_panes * (t[GLASS_INNER] - t[GLASS_OUTER])
    flux_channel = (
        c.h_gap_convective * (t[WALL_OUTER] - t[GAP_AIR])
        + c.h_gap_radiative * (t[WALL_OUTER] - t[GLASS_INNER])
    )
    conduction = wall.conductivity * (t_wall[:-1] - t_wall[1:]) / mesh.dx
    flux_room = (
        c.h_room_convective * (t[mesh.wall_inner] - room.air_temperature)
        + c.h_room_radiative * (t[mesh.wall_inner] - room.mean_radiant_temperature)
    )
    # all expressed as flux toward the ambient (positive when the room
    # loses heat, as it does with no sun and a cold exterior)
    fluxes = np.concatenate((
        [flux_exterior, flux_panes, flux_channel], -conduction, [-flux_room]
    ))
    reference = abs(fluxes[-1])
    flux_residual = float(np.max(np.abs(fluxes - fluxes[-1]))) / reference

    analytic = oracle.analytic_steady_profile(
        c, system, mesh, forcing.t_ambient, forcing.t_sky, forcing.q_solar
    )
    analytic_mismatch = float(np.max(np.abs(t - analytic)))

    worst = max(linearity, flux_residual, analytic_mismatch)
    return CheckResult(
        name="steady-profile",
        passed=worst < limit,
        measured=worst,
        limit=limit,
        detail=(f"[linearity {linearity:.1e} K, flux residual {flux_residual:.1e},"
                f" vs analytic {analytic_mismatch:.1e} K]"),
    )


# ---------------------------------------------------------------------------
# Observed orders of accuracy on the sinusoidal slab
# ---------------------------------------------------------------------------

_SLAB_DIFFUSIVITY = 7e-7    # m^2/s, dense concrete
_SLAB_PERIOD = 3600.0       # s
_SLAB_MEAN = 300.0          # K
_SLAB_AMPLITUDE = 10.0      # K
_SLAB_THICKNESS = 0.12      # m, >= 4 damping depths at this period


def _slab_error(n_nodes: int, dt: float, sigma: float) -> float:
    """Max-norm error after one period against the periodic solution."""
    def exact(x, t):
        return oracle.analytic_transient_slab(
            _SLAB_DIFFUSIVITY, _SLAB_PERIOD, _SLAB_AMPLITUDE, _SLAB_MEAN, x, t
        )

    x, temps = fdm.run_slab(
        diffusivity=_SLAB_DIFFUSIVITY,
        thickness=_SLAB_THICKNESS,
        n_nodes=n_nodes,
        sigma=sigma,
        dt=dt,
        t_end=_SLAB_PERIOD,
        left=lambda t: exact(0.0, t),
        right=lambda t: exact(_SLAB_THICKNESS, t),
        initial=lambda xs: exact(xs, 0.0),
    )
    return float(np.max(np.abs(temps - exact(x, _SLAB_PERIOD))))


def observed_order(refinements: np.ndarray, errors: np.ndarray) -> float:
    """Least-squares slope of log error against log step size."""
    return float(np.polyfit(np.log(refinements), np.log(errors), 1)[0])


def temporal_study(sigma: float, dts=(300.0, 150.0, 75.0, 37.5)):
    """Errors and observed order under time-step halving, fixed fine mesh."""
    errors = [_slab_error(241, dt, sigma) for dt in dts]
    return np.array(dts), np.array(errors), observed_order(np.array(dts), np.array(errors))


def spatial_study(node_counts=(16, 31, 61, 121), dt: float = 2.0, sigma: float = 0.5):
    """Errors and observed order under mesh halving, tiny time step."""
    dxs = [_SLAB_THICKNESS / (n - 1) for n in node_counts]
    errors = [_slab_error(n, dt, sigma) for n in node_counts]
    return np.array(dxs), np.array(errors), observed_order(np.array(dxs), np.array(errors))


def check_temporal_order(sigma: float, expected: float, band: float = 0.15) -> CheckResult:
    _, _, order = temporal_study(sigma)
    return CheckResult(
        name=f"temporal-order-sigma-{sigma:g}",
        passed=abs(order - expected) <= band,
        measured=order,
        limit=band,
        detail=f"[expected {expected:g} +/- {band:g}]",
    )


def check_spatial_order(expected: float = 2.0, band: float = 0.2) -> CheckResult:
    _, _, order = spatial_study()
    return CheckResult(
        name="spatial-order",
        passed=abs(order - expected) <= band,
        measured=order,
        limit=band,
        detail=f"[expected {expected:g} +/- {band:g}]",
    )


# ---------------------------------------------------------------------------
# Channel consistency
# ---------------------------------------------------------------------------

def check_gap_consistency(
    n_states: int = 20, seed: int = 7, limit: float = 0.02
) -> CheckResult:
    """Marched vs algebraic channel outlet over randomized flow states.

    States are sampled in the thermosiphon operating regime (transfer
    number 2 h B H / (rho G c_p) up to ~0.5); the algebraic reduction is
    a first-order rational fit of the exponential and departs beyond that
    band, which is why the stepper refreshes its buoyancy temperature
    from the marched profile rather than the algebraic one.
    """
    rng = np.random.default_rng(seed)
    base = reference_system()
    wall = base.wall
    gap = base.gap
    worst = 0.0
    for _ in range(n_states):
        h = rng.uniform(2.0, 5.0)
        transfer = rng.uniform(0.05, 0.5)
        flow = (2.0 * h * wall.width * wall.height
                / (gap.air_density * gap.air_heat_capacity * transfer))
        inlet = rng.uniform(283.0, 298.0)
        t_surface_a = inlet + rng.uniform(2.0, 45.0)
        t_surface_b = inlet + rng.uniform(2.0, 45.0)
        coeffs = CoefficientSet(
            h_gap_convective=h, h_gap_radiative=4.0, h_panes=6.0,
            h_exterior_convective=12.0, h_exterior_radiative=4.0,
            h_room_convective=3.0, h_room_radiative=5.0,
            velocity=flow / gap.cross_section, volume_flow=flow,
        )
        marched = march_gap_profile(t_surface_a, t_surface_b, inlet, coeffs,
                                    gap, wall, n_nodes=200)
        algebraic = solve_gap_algebraic(t_surface_a, t_surface_b, inlet,
                                        coeffs, gap, wall)
        rise = algebraic.outlet - inlet
        worst = max(worst, abs(marched.outlet - algebraic.outlet) / abs(rise))
    return CheckResult(
        name="gap-march-vs-algebraic",
        passed=worst <= limit,
        measured=worst,
        limit=limit,
        detail=f"[{n_states} random flow states, relative to the outlet rise]",
    )


# ---------------------------------------------------------------------------
# Full-scenario checks
# ---------------------------------------------------------------------------

def run_reference_scenario(
    spin_up_days: float = 5.0,
    report_days: float = 2.0,
    dt: float = 60.0,
    wall_nodes: int = 31,
):
    """February scenario on the reference geometry; returns (records, cfg, mesh)."""
    system = reference_system()
    cfg = NumericsConfig(dt=dt)
    mesh = Mesh.for_wall(system.wall, wall_nodes)
    climate = february_preset(int(spin_up_days + report_days) + 1)
    records = fdm.simulate(system, cfg, climate, spin_up_days=spin_up_days,
                           report_days=report_days, mesh=mesh)
    return records, system, cfg, mesh


def check_energy_closure(limit: float = 0.01) -> CheckResult:
    """Flux integral vs stored-energy difference over one synthetic day.

    After a one-day warm-up (so the starting state satisfies the massless
    balance rows), a full day is stepped and the net flux is integrated
    with the same sigma weighting the stepper uses.  For a converged
    solve the weighted flux sum telescopes against the wall's stored
    energy exactly, up to the fixpoint tolerance; the residual is
    normalised by the absorbed solar integral.
    """
    system = reference_system()
    cfg = NumericsConfig(dt=60.0)
    mesh = Mesh.for_wall(system.wall)
    climate = february_preset(3)
    glazing = system.glazing
    sigma = cfg.sigma

    def net_flux(state: ThermalState) -> tuple[float, float]:
        forcing = fdm.forcing_from_sample(climate.at(state.time), glazing)
        balance = fdm.energy_balance(state, forcing, system, mesh)
        net = (balance.absorbed_solar - balance.ambient_loss
               - balance.vent_gain - balance.room_gain)
        return net, balance.absorbed_solar

    state = fdm.initial_state(system, cfg, mesh, climate)
    steps_per_day = int(86400.0 / cfg.dt)
    forcing_prev = fdm.forcing_from_sample(climate.at(0.0), glazing)
    for k in range(1, steps_per_day + 1):
        forcing_new = fdm.forcing_from_sample(climate.at(k * cfg.dt), glazing)
        state = time_step(state, BoundaryData(forcing_new, forcing_prev),
                          system, cfg, mesh)
        forcing_prev = forcing_new

    stored_start = fdm.stored_energy(state, system, mesh)
    net_prev, _ = net_flux(state)
    integral = 0.0
    absorbed_integral = 0.0
    for k in range(steps_per_day + 1, 2 * steps_per_day + 1):
        forcing_new = fdm.forcing_from_sample(climate.at(k * cfg.dt), glazing)
        state = time_step(state, BoundaryData(forcing_new, forcing_prev),
                          system, cfg, mesh)
        forcing_prev = forcing_new
        net, absorbed = net_flux(state)
        integral += cfg.dt * (sigma * net + (1.0 - sigma) * net_prev)
        absorbed_integral += cfg.dt * absorbed
        net_prev = net

    stored_change = fdm.stored_energy(state, system, mesh) - stored_start
    residual = abs(integral - stored_change) / absorbed_integral
    return CheckResult(
        name="energy-closure",
        passed=residual <= limit,
        measured=residual,
        limit=limit,
        detail="[one synthetic day at dt = 60 s]",
    )


def check_diurnal_shape(
    min_lag_hours: float = 4.0, max_amplitude_ratio: float = 0.5
) -> CheckResult:
    """Inner-surface response must lag and be damped vs the absorber face."""
    records, system, cfg, mesh = run_reference_scenario()
    day = int(86400.0 / cfg.dt)
    states = [rec[0] for rec in records[-day:]]
    outer = np.array([s.temperatures[WALL_OUTER] for s in states])
    inner = np.array([s.temperatures[mesh.wall_inner] for s in states])
    lag_steps = (int(np.argmax(inner)) - int(np.argmax(outer))) % day
    lag_hours = lag_steps * cfg.dt / 3600.0
    ratio = float((inner.max() - inner.min()) / (outer.max() - outer.min()))
    passed = lag_hours >= min_lag_hours and ratio < max_amplitude_ratio
    return CheckResult(
        name="diurnal-lag-and-damping",
        passed=passed,
        measured=lag_hours,
        limit=min_lag_hours,
        detail=f"[lag {lag_hours:.1f} h (>= {min_lag_hours} h), amplitude ratio "
               f"{ratio:.2f} (< {max_amplitude_ratio})]",
    )


def check_march_convergence(limit: float = 0.1) -> CheckResult:
    """Channel march must be first order: doubling the node count must
    halve the outlet error, to within 20% of the halving ratio."""
    base = reference_system()
    coeffs = CoefficientSet(
        h_gap_convective=3.0, h_gap_radiative=4.0, h_panes=6.0,
        h_exterior_convective=12.0, h_exterior_radiative=4.0,
        h_room_convective=3.0, h_room_radiative=5.0,
        velocity=0.1 / base.gap.cross_section, volume_flow=0.1,
    )
    capacity = base.gap.air_density * 0.1 * base.gap.air_heat_capacity
    k = 2.0 * coeffs.h_gap_convective * base.wall.width / capacity
    t_surface = 320.0
    inlet = 293.15
    exact = t_surface + (inlet - t_surface) * math.exp(-k * base.wall.height)
    worst = 0.0
    previous_error = None
    for n in (25, 50, 100, 200):
        flow = march_gap_profile(330.0, 310.0, inlet, coeffs, base.gap,
                                 base.wall, n_nodes=n)
        error = abs(flow.outlet - exact)
        if previous_error is not None:
            worst = max(worst, abs(error / previous_error - 0.5))
        previous_error = error
    return CheckResult(
        name="gap-march-order",
        passed=worst <= limit,
        measured=worst,
        limit=limit,
        detail="[deviation of the error-halving ratio from 0.5]",
    )


def check_runtime(limit_seconds: float = 5.0) -> CheckResult:
    """Seven simulated days at dt = 60 s, 31 wall nodes, end to end."""
    started = _time.perf_counter()
    records, _, _, _ = run_reference_scenario(spin_up_days=5.0, report_days=2.0)
    elapsed = _time.perf_counter() - started
    steps = len(records)
    return CheckResult(
        name="end-to-end-runtime",
        passed=elapsed < limit_seconds and steps > 0,
        measured=elapsed,
        limit=limit_seconds,
        detail=f"[{steps} reported steps]",
    )


# ---------------------------------------------------------------------------
# Suite runners
# ---------------------------------------------------------------------------

def quick_suite(perturbation: float = 1.0) -> list[CheckResult]:
    """Fast subset for routine verification (seconds, not minutes)."""
    return [
        check_sweep_vs_dense(n_systems=20, perturbation=perturbation),
        check_equilibrium_fixpoint(steps=200),
        check_gap_consistency(),
        check_march_convergence(),
    ]


def full_suite(perturbation: float = 1.0) -> list[CheckResult]:
    """Every check, including the order studies and full-day scenarios."""
    return [
        check_sweep_vs_dense(n_systems=100, perturbation=perturbation),
        check_equilibrium_fixpoint(steps=1000),
        check_gap_consistency(),
        check_march_convergence(),
        check_steady_profile(),
        check_temporal_order(sigma=0.5, expected=2.0),
        check_temporal_order(sigma=1.0, expected=1.0),
        check_spatial_order(),
        check_energy_closure(),
        check_diurnal_shape(),
        check_runtime(),
    ]
