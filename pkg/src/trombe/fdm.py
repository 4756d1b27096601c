"""Implicit finite-difference core: mesh, sweeps and time stepping.

Mesh layout (node index -> meaning, N = wall_nodes + 3):

    0          outer glass pane
    1          inner glass pane
    2          channel air (mean of inlet and outlet)
    3          outer (absorber) wall surface
    4 .. N-2   wall interior
    N-1        inner (room-side) wall surface

The glass panes and the channel air carry no thermal mass: their rows are
instantaneous balances at the new time level.  Wall rows use the
sigma-weighted scheme (sigma = 0.5 Crank-Nicolson, sigma = 1 fully
implicit) with half-cell thermal mass on the two surface nodes.  The
explicit part of a wall-surface balance is formed with the coefficient
set stored on the previous state, i.e. the coefficients that actually
produced that state.

Assembled interior rows follow the convention

    A*T[i-1] + B*T[i] + C*T[i+1] + F = 0        (unknowns at level n+1)

with A = C = 1, B = -(2 + dx^2/(sigma dt a)) and F collecting the
explicit terms, so a uniform field is an exact fixed point of the row.

The inner-glass balance couples three consecutive unknowns (pane
conduction to node 0, channel convection to node 2, radiation across the
channel to node 3), which the classical two-coefficient elimination
T[i] = alpha*T[i+1] + beta cannot absorb.  The solver therefore carries a
three-term recurrence

    T[i] = alpha[i]*T[i+1] + gamma[i]*T[i+2] + beta[i]

whose gamma is nonzero only at the inner-glass node; ordinary wall layers
reduce to the classical sweep.  Both the classical two-pass solver (for
plain-slab verification problems) and the extended solver ship here; the
dense reference path lives in :mod:`trombe.oracle`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .airgap import _march_outlet
from .model import (
    CoefficientSet,
    GlazingSpec,
    SystemSpec,
    WallSpec,
    build_coefficients,
    gap_velocity,
    sky_temperature,
)

# Node indices of the three massless layers and the absorber surface.
GLASS_OUTER = 0
GLASS_INNER = 1
GAP_AIR = 2
WALL_OUTER = 3

_PIVOT_FLOOR = 1e-300


class SingularSystemError(ArithmeticError):
    """A forward-sweep pivot or dense-elimination pivot vanished."""


# ---------------------------------------------------------------------------
# Configuration and state containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mesh:
    """Uniform wall mesh plus the three massless layers in front of it."""

    wall_nodes: int
    dx: float

    def __post_init__(self) -> None:
        if self.wall_nodes < 3:
            raise ValueError(f"wall_nodes must be >= 3, got {self.wall_nodes}")
        if not self.dx > 0.0:
            raise ValueError(f"dx must be positive, got {self.dx!r}")

    @classmethod
    def for_wall(cls, wall: WallSpec, wall_nodes: int = 31) -> "Mesh":
        return cls(wall_nodes=wall_nodes, dx=wall.thickness / (wall_nodes - 1))

    @property
    def node_count(self) -> int:
        return self.wall_nodes + 3

    @property
    def wall_inner(self) -> int:
        """Index of the room-side wall surface node."""
        return self.node_count - 1

    @property
    def wall_mid(self) -> int:
        """Index of the node nearest the wall mid-plane."""
        return WALL_OUTER + (self.wall_nodes - 1) // 2

    def wall_x(self) -> np.ndarray:
        """Depth coordinate of each wall node, x = 0 at the absorber face."""
        return self.dx * np.arange(self.wall_nodes)

    def labels(self) -> tuple[str, ...]:
        names = ["glass-outer", "glass-inner", "gap-air", "wall-surface-outer"]
        names += [f"wall-interior-{k}" for k in range(1, self.wall_nodes - 1)]
        names.append("wall-surface-inner")
        return tuple(names)


@dataclass(frozen=True)
class NumericsConfig:
    """Time-stepping and fixpoint controls.

    ``sigma`` blends the spatial terms between the old and new time level:
    0.5 is Crank-Nicolson (second order in time), 1.0 fully implicit.
    ``under_relaxation`` damps the channel-velocity update between
    fixpoint iterations.  ``gap_nodes`` is the resolution of the channel
    march used to refresh the buoyancy temperature.
    """

    sigma: float = 0.5
    dt: float = 60.0
    fixpoint_tol: float = 1e-4
    fixpoint_max_iter: int = 50
    under_relaxation: float = 0.5
    gap_nodes: int = 50

    def __post_init__(self) -> None:
        if not 0.5 <= self.sigma <= 1.0:
            raise ValueError(f"sigma must lie in [0.5, 1], got {self.sigma!r}")
        if not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if not self.fixpoint_tol > 0.0:
            raise ValueError(f"fixpoint_tol must be positive, got {self.fixpoint_tol!r}")
        if self.fixpoint_max_iter < 1:
            raise ValueError("fixpoint_max_iter must be >= 1")
        if not 0.0 < self.under_relaxation <= 1.0:
            raise ValueError("under_relaxation must lie in (0, 1]")
        if self.gap_nodes < 2:
            raise ValueError("gap_nodes must be >= 2")


@dataclass(frozen=True)
class Forcing:
    """Climate forcing at one time level."""

    q_solar: float     # W/m^2 incident on the vertical glazing
    t_ambient: float   # K
    t_sky: float       # K

    def __post_init__(self) -> None:
        if self.q_solar < 0.0:
            raise ValueError(f"q_solar must be >= 0, got {self.q_solar!r}")
        if not (self.t_ambient > 0.0 and self.t_sky > 0.0):
            raise ValueError("forcing temperatures must be positive")


@dataclass(frozen=True)
class BoundaryData:
    """Forcing at both ends of a time step (new level first)."""

    current: Forcing
    previous: Forcing


def forcing_from_sample(sample, glazing: GlazingSpec) -> Forcing:
    """Build a forcing record from a climate sample, deriving the sky
    temperature from the configured clear-sky coefficient."""
    return Forcing(
        q_solar=sample.insolation,
        t_ambient=sample.ambient,
        t_sky=sky_temperature(sample.ambient, glazing.sky_coefficient),
    )


@dataclass(frozen=True)
class ThermalState:
    """Node temperatures at one time level, with solver bookkeeping."""

    time: float
    temperatures: np.ndarray
    coeffs: CoefficientSet
    converged: bool = True
    iterations_used: int = 0

    def __post_init__(self) -> None:
        temps = np.asarray(self.temperatures, dtype=float)
        object.__setattr__(self, "temperatures", temps)
        if not (np.isfinite(temps).all() and (temps > 0.0).all()):
            raise ValueError("temperatures must be finite and > 0 K")


@dataclass(frozen=True)
class SweepCoefficients:
    """Per-node (alpha, gamma, beta) of the three-term recurrence.

    gamma is nonzero at most at the inner-glass node; the triple of the
    last node is unused (the inner surface is closed separately).
    """

    alpha: np.ndarray
    gamma: np.ndarray
    beta: np.ndarray


@dataclass(frozen=True)
class EnergyBalance:
    """Instantaneous flux record, per m^2 of wall face.

    ``stored_rate`` is the temperature-based difference quotient of the
    wall internal energy and is ``None`` when no previous state was
    supplied to difference against.
    """

    ambient_loss: float            # through the glazing to ambient/sky
    vent_gain: float               # enthalpy delivered by the channel flow
    room_gain: float               # inner surface to room, both modes
    room_gain_convective: float
    room_gain_radiative: float
    absorbed_solar: float
    stored_rate: Optional[float] = None


# ---------------------------------------------------------------------------
# Interior rows and the classical two-pass solver
# ---------------------------------------------------------------------------

def _interior_forcing(
    temps: Sequence[float], m: float, sigma: float, lo: int, hi: int
) -> list[float]:
    """F values of the interior rows for wall nodes lo..hi-1 (mesh indexing)."""
    weight = (1.0 - sigma) / sigma
    return [
        weight * (temps[j - 1] - 2.0 * temps[j] + temps[j + 1]) + m * temps[j]
        for j in range(lo, hi)
    ]


def assemble_interior(
    state: ThermalState, mesh: Mesh, cfg: NumericsConfig, wall: WallSpec
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Interior-node rows A*T[i-1] + B*T[i] + C*T[i+1] + F = 0.

    Returns the per-node (A, B, C, F) arrays for the wall interior, one
    entry per node between the two wall surfaces.  A = C = 1 and
    B = -(2 + dx^2/(sigma dt a)) are uniform; F carries the previous-level
    curvature and storage terms.
    """
    m = mesh.dx * mesh.dx / (cfg.sigma * cfg.dt * wall.diffusivity)
    n_interior = mesh.wall_nodes - 2
    temps = state.temperatures.tolist()
    forcing = _interior_forcing(
        temps, m, cfg.sigma, WALL_OUTER + 1, mesh.wall_inner
    )
    ones = np.ones(n_interior)
    return ones, np.full(n_interior, -(2.0 + m)), ones.copy(), np.array(forcing)


def classic_sweep(
    sub: Sequence[float],
    diag: Sequence[float],
    sup: Sequence[float],
    forcing: Sequence[float],
    start_bc: tuple[float, float],
    end_bc: tuple[float, float],
) -> np.ndarray:
    """Two-pass solution of a tridiagonal system with recurrence closures.

    Solves rows sub[i]*T[i-1] + diag[i]*T[i] + sup[i]*T[i+1] + forcing[i] = 0
    for i = 1..I-1 together with the boundary closures

        T[0] = a0*T[1] + b0        and        T[I] = aI*T[I-1] + bI,

    given as ``start_bc`` = (a0, b0) and ``end_bc`` = (aI, bI).  The row
    arrays hold the I-1 interior rows only.  Dirichlet conditions are the
    special case a = 0.
    """
    n_interior = len(diag)
    a0, b0 = start_bc
    a_end, b_end = end_bc
    alpha = [a0]
    beta = [b0]
    for i in range(n_interior):
        den = sub[i] * alpha[i] + diag[i]
        if abs(den) < _PIVOT_FLOOR:
            raise SingularSystemError(f"zero pivot at interior row {i + 1}")
        alpha.append(-sup[i] / den)
        beta.append(-(forcing[i] + sub[i] * beta[i]) / den)
    closure = 1.0 - a_end * alpha[n_interior]
    if abs(closure) < _PIVOT_FLOOR:
        raise SingularSystemError("zero pivot at the end closure")
    out = np.empty(n_interior + 2)
    out[-1] = (a_end * beta[n_interior] + b_end) / closure
    for i in range(n_interior, -1, -1):
        out[i] = alpha[i] * out[i + 1] + beta[i]
    return out


def slab_dirichlet_step(
    temps: np.ndarray,
    left_new: float,
    right_new: float,
    dx: float,
    dt: float,
    sigma: float,
    diffusivity: float,
) -> np.ndarray:
    """Advance a plain slab one step with prescribed surface temperatures."""
    m = dx * dx / (sigma * dt * diffusivity)
    told = temps.tolist()
    n = len(told)
    forcing = _interior_forcing(told, m, sigma, 1, n - 1)
    ones = [1.0] * (n - 2)
    diag = [-(2.0 + m)] * (n - 2)
    return classic_sweep(ones, diag, ones, forcing, (0.0, left_new), (0.0, right_new))


def run_slab(
    diffusivity: float,
    thickness: float,
    n_nodes: int,
    sigma: float,
    dt: float,
    t_end: float,
    left: Callable[[float], float],
    right: Callable[[float], float],
    initial: Callable[[np.ndarray], np.ndarray],
) -> tuple[np.ndarray, np.ndarray]:
    """Run a Dirichlet slab problem to ``t_end`` and return (x, temps)."""
    x = np.linspace(0.0, thickness, n_nodes)
    temps = np.asarray(initial(x), dtype=float)
    n_steps = int(round(t_end / dt))
    if abs(n_steps * dt - t_end) > 1e-9 * max(t_end, 1.0):
        raise ValueError("t_end must be an integer number of steps")
    dx = x[1] - x[0]
    for k in range(1, n_steps + 1):
        t = k * dt
        temps = slab_dirichlet_step(temps, left(t), right(t), dx, dt, sigma, diffusivity)
    return x, temps


# ---------------------------------------------------------------------------
# Extended sweep over the full glazing/channel/wall system
# ---------------------------------------------------------------------------

def gap_exchange_coefficient(coeffs: CoefficientSet, system: SystemSpec) -> float:
    """Flow-side conductance of the channel balance, 2 rho G c_p / (H B).

    Relates the enthalpy removed by the vent flow to the difference
    between the mean channel temperature and the room air; zero whenever
    the vents pass no flow.
    """
    gap = system.gap
    wall = system.wall
    return (
        2.0 * gap.air_density * coeffs.volume_flow * gap.air_heat_capacity
        / (wall.height * wall.width)
    )


def forward_sweep(
    state: ThermalState,
    bc: BoundaryData,
    coeffs: CoefficientSet,
    system: SystemSpec,
    cfg: NumericsConfig,
    mesh: Mesh,
) -> SweepCoefficients:
    """First pass: recurrence coefficients from the outer glass inward.

    Each returned triple satisfies T[i] = alpha[i]*T[i+1] +
    gamma[i]*T[i+2] + beta[i] for the exact solution of the coupled linear
    system of this step.  The outer-glass triple encodes the ambient/sky
    exchange; the inner-glass triple is the only one with gamma != 0.

    Raises
    ------
    SingularSystemError
        If a pivot vanishes; the message names the offending node.
    """
    wall = system.wall
    room = system.room
    n = mesh.node_count
    told = state.temperatures.tolist()
    prev = state.coeffs
    sigma = cfg.sigma
    explicit_weight = 1.0 - sigma
    dx = mesh.dx
    cur = bc.current

    h_ext_c = coeffs.h_exterior_convective
    h_ext_r = coeffs.h_exterior_radiative
    h_panes = coeffs.h_panes
    h_gap_c = coeffs.h_gap_convective
    h_gap_r = coeffs.h_gap_radiative

    alpha = [0.0] * n
    gamma = [0.0] * n
    beta = [0.0] * n

    # Outer glass: massless balance against ambient air, sky and the inner pane.
    d0 = h_panes + h_ext_c + h_ext_r
    if d0 < _PIVOT_FLOOR:
        raise SingularSystemError("zero pivot at node glass-outer")
    alpha[0] = h_panes / d0
    beta[0] = (h_ext_c * cur.t_ambient + h_ext_r * cur.t_sky) / d0

    # Inner glass: pane conduction, channel convection and cross-channel
    # radiation couple three unknowns; this is the one three-term row.
    d1 = h_panes * (1.0 - alpha[0]) + h_gap_c + h_gap_r
    if d1 < _PIVOT_FLOOR:
        raise SingularSystemError("zero pivot at node glass-inner")
    alpha[1] = h_gap_c / d1
    gamma[1] = h_gap_r / d1
    beta[1] = h_panes * beta[0] / d1

    # Channel air: enthalpy transport against convection from both faces.
    # A zero flow coefficient reduces the row to the stagnant balance.
    k_flow = gap_exchange_coefficient(coeffs, system)
    d2 = k_flow + h_gap_c * (2.0 - alpha[1])
    if d2 < _PIVOT_FLOOR:
        raise SingularSystemError("zero pivot at node gap-air")
    alpha[2] = h_gap_c * (1.0 + gamma[1]) / d2
    beta[2] = (k_flow * room.air_temperature + h_gap_c * beta[1]) / d2

    # Absorber surface: half-cell mass, absorbed solar flux, exchange with
    # channel air and inner pane, conduction into the wall.
    mass = wall.density * wall.heat_capacity * dx / (2.0 * cfg.dt)
    conduct = wall.conductivity / dx
    tau_alpha = wall.absorptance_transmittance
    explicit_surface = (
        bc.previous.q_solar * tau_alpha
        + prev.h_gap_convective * (told[GAP_AIR] - told[WALL_OUTER])
        + prev.h_gap_radiative * (told[GLASS_INNER] - told[WALL_OUTER])
        + conduct * (told[WALL_OUTER + 1] - told[WALL_OUTER])
    )
    rhs_surface = (
        mass * told[WALL_OUTER]
        + sigma * cur.q_solar * tau_alpha
        + explicit_weight * explicit_surface
    )
    pivot = (
        mass
        + sigma * (h_gap_c + h_gap_r + conduct)
        - sigma * h_gap_r * (alpha[1] * alpha[2] + gamma[1])
        - sigma * h_gap_c * alpha[2]
    )
    if pivot < _PIVOT_FLOOR:
        raise SingularSystemError("zero pivot at node wall-surface-outer")
    alpha[3] = sigma * conduct / pivot
    beta[3] = (
        rhs_surface
        + sigma * h_gap_r * (alpha[1] * beta[2] + beta[1])
        + sigma * h_gap_c * beta[2]
    ) / pivot

    # Ordinary wall layers: the classical recurrence.
    m = dx * dx / (sigma * cfg.dt * wall.diffusivity)
    weight = explicit_weight / sigma
    for j in range(WALL_OUTER + 1, n - 1):
        f = weight * (told[j - 1] - 2.0 * told[j] + told[j + 1]) + m * told[j]
        den = 2.0 + m - alpha[j - 1]
        if den < _PIVOT_FLOOR:
            raise SingularSystemError(f"zero pivot at node wall-interior-{j - WALL_OUTER}")
        alpha[j] = 1.0 / den
        beta[j] = (beta[j - 1] + f) / den

    return SweepCoefficients(
        alpha=np.array(alpha), gamma=np.array(gamma), beta=np.array(beta)
    )


def close_inner_surface(
    sweep: SweepCoefficients,
    state: ThermalState,
    coeffs: CoefficientSet,
    system: SystemSpec,
    cfg: NumericsConfig,
    mesh: Mesh,
) -> float:
    """Inner-surface temperature closing the sweep against the room balance."""
    wall = system.wall
    room = system.room
    told = state.temperatures.tolist()
    prev = state.coeffs
    sigma = cfg.sigma
    dx = mesh.dx
    last = mesh.wall_inner

    mass = wall.density * wall.heat_capacity * dx / (2.0 * cfg.dt)
    conduct = wall.conductivity / dx
    h_room_c = coeffs.h_room_convective
    h_room_r = coeffs.h_room_radiative
    explicit = (
        conduct * (told[last - 1] - told[last])
        - prev.h_room_convective * (told[last] - room.air_temperature)
        - prev.h_room_radiative * (told[last] - room.mean_radiant_temperature)
    )
    rhs = (
        mass * told[last]
        + sigma * (h_room_c * room.air_temperature
                   + h_room_r * room.mean_radiant_temperature)
        + (1.0 - sigma) * explicit
    )
    alpha_prev = float(sweep.alpha[last - 1])
    beta_prev = float(sweep.beta[last - 1])
    den = mass + sigma * (conduct + h_room_c + h_room_r) - sigma * conduct * alpha_prev
    if den < _PIVOT_FLOOR:
        raise SingularSystemError("zero pivot at node wall-surface-inner")
    return (rhs + sigma * conduct * beta_prev) / den


def back_substitute(sweep: SweepCoefficients, t_inner: float, mesh: Mesh) -> np.ndarray:
    """Second pass: fill all node temperatures in reverse mesh order.

    The three-term recurrence is evaluated from the inner wall surface
    outward; the gamma contribution is exercised only at the inner-glass
    node, whose second neighbour (the absorber surface) is already known
    by the time the recurrence reaches it.
    """
    alpha = sweep.alpha.tolist()
    gamma = sweep.gamma.tolist()
    beta = sweep.beta.tolist()
    n = mesh.node_count
    out = [0.0] * n
    out[n - 1] = t_inner
    for j in range(n - 2, -1, -1):
        value = alpha[j] * out[j + 1] + beta[j]
        g = gamma[j]
        if g != 0.0:
            value += g * out[j + 2]
        out[j] = value
    return np.array(out)


def sweep_step(
    state: ThermalState,
    bc: BoundaryData,
    coeffs: CoefficientSet,
    system: SystemSpec,
    cfg: NumericsConfig,
    mesh: Mesh,
) -> np.ndarray:
    """One linear solve of the coupled system via the extended sweep."""
    sweep = forward_sweep(state, bc, coeffs, system, cfg, mesh)
    # the recurrence stays classical everywhere except the inner glass
    assert not np.any(np.delete(sweep.gamma, GLASS_INNER))
    t_inner = close_inner_surface(sweep, state, coeffs, system, cfg, mesh)
    return back_substitute(sweep, t_inner, mesh)


StepSolver = Callable[
    [ThermalState, BoundaryData, CoefficientSet, SystemSpec, NumericsConfig, Mesh],
    np.ndarray,
]


# ---------------------------------------------------------------------------
# Time stepping
# ---------------------------------------------------------------------------

def time_step(
    state: ThermalState,
    bc: BoundaryData,
    system: SystemSpec,
    cfg: NumericsConfig,
    mesh: Mesh,
    step_solver: StepSolver | None = None,
) -> ThermalState:
    """Advance one time step with the coefficient fixpoint loop.

    Each iteration (1) refreshes the buoyancy velocity (under-relaxed)
    and the exchange coefficients from the current iterate, (2) marches
    the channel profile with the fresh surface temperatures to update the
    buoyancy temperature for the next iteration, and (3) re-solves the
    coupled linear system.  Iteration stops when the largest node change
    between successive solves drops below ``fixpoint_tol``; hitting the
    iteration cap returns a state flagged ``converged=False`` rather than
    a silent wrong answer.

    ``step_solver`` swaps the linear-solve backend (default: the extended
    sweep; :func:`trombe.oracle.dense_step` is the reference alternative).
    """
    solver = step_solver if step_solver is not None else sweep_step
    gap = system.gap
    wall = system.wall
    room = system.room
    time_new = state.time + cfg.dt
    vents = gap.vents_open_at(time_new)
    relax = cfg.under_relaxation

    iterate = state.temperatures
    velocity = state.coeffs.velocity
    t_buoyancy = float(iterate[GAP_AIR])
    coeffs = state.coeffs
    converged = False
    iterations = 0

    for iterations in range(1, cfg.fixpoint_max_iter + 1):
        if vents:
            v_raw = gap_velocity(gap, wall, t_buoyancy, room.air_temperature)
            velocity = relax * v_raw + (1.0 - relax) * velocity
            # the diode regime relaxes toward zero geometrically; snap
            # negligible velocities so stagnant nights are exactly stagnant
            if velocity < 1e-9:
                velocity = 0.0
        else:
            velocity = 0.0
        coeffs = build_coefficients(
            system,
            float(iterate[GLASS_OUTER]),
            float(iterate[GLASS_INNER]),
            float(iterate[WALL_OUTER]),
            bc.current.t_sky,
            velocity,
            vents,
        )
        solved = solver(state, bc, coeffs, system, cfg, mesh)
        delta = float(np.max(np.abs(solved - iterate)))
        iterate = solved
        if coeffs.volume_flow > 0.0:
            capacity_flow = (
                gap.air_density * coeffs.volume_flow * gap.air_heat_capacity
            )
            exchange = 2.0 * coeffs.h_gap_convective * wall.width / capacity_flow
            outlet = _march_outlet(
                0.5 * (float(iterate[WALL_OUTER]) + float(iterate[GLASS_INNER])),
                room.air_temperature,
                exchange,
                wall.height,
                cfg.gap_nodes,
            )
            t_buoyancy = 0.5 * (outlet + room.air_temperature)
        else:
            t_buoyancy = float(iterate[GAP_AIR])
        if delta < cfg.fixpoint_tol:
            converged = True
            break

    return ThermalState(
        time=time_new,
        temperatures=iterate,
        coeffs=coeffs,
        converged=converged,
        iterations_used=iterations,
    )


def stored_energy(state: ThermalState, system: SystemSpec, mesh: Mesh) -> float:
    """Internal energy of the wall per m^2 of face [J/m^2].

    Trapezoidal node weights: half cells at the two surfaces, full cells
    inside, matching the mass terms of the discrete balance.
    """
    wall = system.wall
    temps = state.temperatures[WALL_OUTER:]
    weights = np.full(mesh.wall_nodes, mesh.dx)
    weights[0] = weights[-1] = 0.5 * mesh.dx
    return wall.density * wall.heat_capacity * float(np.dot(weights, temps))


def energy_balance(
    state: ThermalState,
    forcing: Forcing,
    system: SystemSpec,
    mesh: Mesh,
    previous: ThermalState | None = None,
) -> EnergyBalance:
    """Instantaneous flux record of a solved state, per m^2 of wall face.

    Fluxes are evaluated with the coefficient set stored on the state, so
    a converged state satisfies absorbed - losses - gains = stored rate up
    to the fixpoint tolerance when the stored rate is formed with the same
    sigma weighting as the step.  ``previous`` enables the temperature-
    based stored-rate difference quotient.
    """
    c = state.coeffs
    room = system.room
    t = state.temperatures
    ambient_loss = (
        c.h_exterior_convective * (float(t[GLASS_OUTER]) - forcing.t_ambient)
        + c.h_exterior_radiative * (float(t[GLASS_OUTER]) - forcing.t_sky)
    )
    vent_gain = gap_exchange_coefficient(c, system) * (
        float(t[GAP_AIR]) - room.air_temperature
    )
    inner = float(t[mesh.wall_inner])
    room_conv = c.h_room_convective * (inner - room.air_temperature)
    room_rad = c.h_room_radiative * (inner - room.mean_radiant_temperature)
    stored_rate = None
    if previous is not None:
        dt = state.time - previous.time
        stored_rate = (
            stored_energy(state, system, mesh) - stored_energy(previous, system, mesh)
        ) / dt
    return EnergyBalance(
        ambient_loss=ambient_loss,
        vent_gain=vent_gain,
        room_gain=room_conv + room_rad,
        room_gain_convective=room_conv,
        room_gain_radiative=room_rad,
        absorbed_solar=forcing.q_solar * system.wall.absorptance_transmittance,
        stored_rate=stored_rate,
    )


def initial_state(system: SystemSpec, cfg: NumericsConfig, mesh: Mesh, climate) -> ThermalState:
    """Uniform starting field at the first climate sample's ambient
    temperature, with a matching stagnant coefficient set."""
    first = climate.samples[0]
    t0 = first.ambient
    temps = np.full(mesh.node_count, t0)
    coeffs = build_coefficients(
        system,
        t0,
        t0,
        t0,
        sky_temperature(t0, system.glazing.sky_coefficient),
        velocity=0.0,
        vents_open=system.gap.vents_open_at(first.time),
    )
    return ThermalState(
        time=first.time, temperatures=temps, coeffs=coeffs,
        converged=True, iterations_used=0,
    )


def simulate(
    system: SystemSpec,
    cfg: NumericsConfig,
    climate,
    spin_up_days: float = 5.0,
    report_days: float | None = None,
    mesh: Mesh | None = None,
    step_solver: StepSolver | None = None,
) -> list[tuple[ThermalState, EnergyBalance]]:
    """Run the scenario and return (state, balance) records after spin-up.

    The climate series is linearly interpolated to the solver step.  The
    reporting horizon defaults to whatever the series covers beyond the
    spin-up; the series must cover spin-up plus reporting or the run is
    refused before stepping begins.  A zero-length reporting horizon
    yields an empty list.
    """
    if mesh is None:
        mesh = Mesh.for_wall(system.wall)
    spin_seconds = spin_up_days * 86400.0
    available = climate.duration
    if report_days is None:
        report_seconds = max(available - spin_seconds, 0.0)
    else:
        report_seconds = report_days * 86400.0
    horizon = spin_seconds + report_seconds
    if horizon > available + 1e-6:
        raise ValueError(
            f"climate series covers {available:.0f} s but the run needs "
            f"{horizon:.0f} s (spin-up {spin_up_days} d + report)"
        )
    n_steps = int(horizon / cfg.dt + 1e-9)

    start = climate.samples[0].time
    state = initial_state(system, cfg, mesh, climate)
    glazing = system.glazing
    forcing_prev = forcing_from_sample(climate.at(start), glazing)
    report_from = start + spin_seconds
    out: list[tuple[ThermalState, EnergyBalance]] = []
    for k in range(1, n_steps + 1):
        forcing_new = forcing_from_sample(climate.at(start + k * cfg.dt), glazing)
        bc = BoundaryData(current=forcing_new, previous=forcing_prev)
        new_state = time_step(state, bc, system, cfg, mesh, step_solver)
        if new_state.time > report_from + 1e-9:
            out.append(
                (new_state, energy_balance(new_state, forcing_new, system, mesh,
                                           previous=state))
            )
        state = new_state
        forcing_prev = forcing_new
    return out
