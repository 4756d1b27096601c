"""Independent reference solvers for verification.

Everything here is deliberately assembled from the balance equations
directly, without reusing the sweep recurrences, so that agreement
between the two routes is meaningful:

* :func:`dense_step` builds the full coupled linear system of one time
  step row by row (with per-row provenance labels) and solves it by
  Gaussian elimination with partial pivoting;
* :func:`analytic_steady_profile` solves the steady resistance network
  glazing/channel/wall/room exactly, giving the linear-in-depth wall
  profile that a converged constant-boundary run must reproduce;
* :func:`analytic_transient_slab` is the classical periodic conduction
  solution T = mean + A exp(-x/d) cos(w t - x/d), d = sqrt(2 a / w),
  used to measure observed orders of accuracy of the slab scheme.

The dense path is O(n^3) and favours robustness over speed; it ships in
the library (not only the tests) so field installations can re-run the
verification suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fdm import (
    GAP_AIR,
    GLASS_INNER,
    GLASS_OUTER,
    WALL_OUTER,
    BoundaryData,
    Mesh,
    NumericsConfig,
    SingularSystemError,
    ThermalState,
    gap_exchange_coefficient,
)
from .model import CoefficientSet, SystemSpec


@dataclass(frozen=True)
class DenseSystem:
    """Fully assembled linear system with per-row provenance labels."""

    matrix: np.ndarray
    rhs: np.ndarray
    labels: tuple[str, ...]

    def solve(self) -> np.ndarray:
        return gaussian_eliminate(self.matrix, self.rhs, self.labels)


def gaussian_eliminate(
    matrix: np.ndarray, rhs: np.ndarray, labels: tuple[str, ...] | None = None
) -> np.ndarray:
    """Direct solve by Gaussian elimination with partial pivoting.

    Raises
    ------
    SingularSystemError
        When no usable pivot remains in a column; the message names the
        label of the offending row (the row left at the pivot position).
    """
    a = np.array(matrix, dtype=float)
    b = np.array(rhs, dtype=float)
    n = len(b)
    if labels is None:
        labels = tuple(f"row {i}" for i in range(n))
    order = list(range(n))
    scale = np.abs(a).max(axis=1)
    floor = 1e-13 * max(float(scale.max()), 1.0)

    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= floor:
            raise SingularSystemError(
                f"singular linear system: no pivot in column {k} "
                f"(row '{labels[order[k]]}')"
            )
        if p != k:
            a[[k, p]] = a[[p, k]]
            b[k], b[p] = b[p], b[k]
            order[k], order[p] = order[p], order[k]
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= np.outer(factors, a[k, k:])
        b[k + 1:] -= factors * b[k]

    if abs(a[n - 1, n - 1]) <= floor:
        raise SingularSystemError(
            f"singular linear system at row '{labels[order[n - 1]]}'"
        )
    x = np.empty(n)
    for i in range(n - 1, -1, -1):
        x[i] = (b[i] - a[i, i + 1:] @ x[i + 1:]) / a[i, i]
    return x


def build_dense_system(
    state: ThermalState,
    bc: BoundaryData,
    coeffs: CoefficientSet,
    system: SystemSpec,
    cfg: NumericsConfig,
    mesh: Mesh,
) -> DenseSystem:
    """Assemble the coupled system of one time step as a dense matrix.

    Rows are written straight from the balance equations: instantaneous
    balances for the two panes and the channel air, sigma-weighted
    balances with half-cell mass for the two wall surfaces, the standard
    sigma scheme for the wall interior.  Explicit terms use the
    coefficient set stored on the previous state, mirroring the sweep
    path's contract without sharing any of its algebra.
    """
    wall = system.wall
    room = system.room
    n = mesh.node_count
    told = state.temperatures
    prev = state.coeffs
    sigma = cfg.sigma
    expl = 1.0 - sigma
    dx = mesh.dx
    cur = bc.current
    matrix = np.zeros((n, n))
    rhs = np.zeros(n)
    labels = mesh.labels()

    # Outer pane: exchange with ambient, sky and the inner pane sums to zero.
    matrix[0, 0] = coeffs.h_exterior_convective + coeffs.h_exterior_radiative + coeffs.h_panes
    matrix[0, 1] = -coeffs.h_panes
    rhs[0] = (coeffs.h_exterior_convective * cur.t_ambient
              + coeffs.h_exterior_radiative * cur.t_sky)

    # Inner pane: pane conduction balances channel convection and radiation
    # across the channel from the absorber surface.
    matrix[1, 0] = -coeffs.h_panes
    matrix[1, 1] = coeffs.h_panes + coeffs.h_gap_convective + coeffs.h_gap_radiative
    matrix[1, 2] = -coeffs.h_gap_convective
    matrix[1, 3] = -coeffs.h_gap_radiative

    # Channel air: enthalpy carried to the room balances convection from
    # both faces; k_flow = 0 leaves the stagnant two-surface balance.
    k_flow = gap_exchange_coefficient(coeffs, system)
    matrix[2, 1] = -coeffs.h_gap_convective
    matrix[2, 2] = k_flow + 2.0 * coeffs.h_gap_convective
    matrix[2, 3] = -coeffs.h_gap_convective
    rhs[2] = k_flow * room.air_temperature

    # Absorber surface, half-cell mass.
    mass = wall.density * wall.heat_capacity * dx / (2.0 * cfg.dt)
    conduct = wall.conductivity / dx
    tau_alpha = wall.absorptance_transmittance
    i = WALL_OUTER
    matrix[i, GLASS_INNER] = -sigma * coeffs.h_gap_radiative
    matrix[i, GAP_AIR] = -sigma * coeffs.h_gap_convective
    matrix[i, i] = mass + sigma * (coeffs.h_gap_convective
                                   + coeffs.h_gap_radiative + conduct)
    matrix[i, i + 1] = -sigma * conduct
    rhs[i] = (
        mass * told[i]
        + sigma * cur.q_solar * tau_alpha
        + expl * (
            bc.previous.q_solar * tau_alpha
            + prev.h_gap_convective * (told[GAP_AIR] - told[i])
            + prev.h_gap_radiative * (told[GLASS_INNER] - told[i])
            + conduct * (told[i + 1] - told[i])
        )
    )

    # Wall interior.
    m = dx * dx / (sigma * cfg.dt * wall.diffusivity)
    for i in range(WALL_OUTER + 1, n - 1):
        matrix[i, i - 1] = -1.0
        matrix[i, i] = 2.0 + m
        matrix[i, i + 1] = -1.0
        rhs[i] = (expl / sigma) * (told[i - 1] - 2.0 * told[i] + told[i + 1]) + m * told[i]

    # Inner surface against the room, half-cell mass.
    i = n - 1
    matrix[i, i - 1] = -sigma * conduct
    matrix[i, i] = mass + sigma * (conduct + coeffs.h_room_convective
                                   + coeffs.h_room_radiative)
    rhs[i] = (
        mass * told[i]
        + sigma * (coeffs.h_room_convective * room.air_temperature
                   + coeffs.h_room_radiative * room.mean_radiant_temperature)
        + expl * (
            conduct * (told[i - 1] - told[i])
            - prev.h_room_convective * (told[i] - room.air_temperature)
            - prev.h_room_radiative * (told[i] - room.mean_radiant_temperature)
        )
    )

    return DenseSystem(matrix=matrix, rhs=rhs, labels=labels)


def dense_step(
    state: ThermalState,
    bc: BoundaryData,
    coeffs: CoefficientSet,
    system: SystemSpec,
    cfg: NumericsConfig,
    mesh: Mesh,
) -> np.ndarray:
    """Reference linear solve of one step; same contract as ``sweep_step``."""
    return build_dense_system(state, bc, coeffs, system, cfg, mesh).solve()


def analytic_steady_profile(
    coeffs: CoefficientSet,
    system: SystemSpec,
    mesh: Mesh,
    t_ambient: float,
    t_sky: float | None = None,
    q_solar: float = 0.0,
) -> np.ndarray:
    """Exact steady temperatures of the resistance network, on the mesh.

    Solves the five steady balances (two panes, channel air, two wall
    surfaces with the wall as a single conductance) for fixed exchange
    coefficients and fills the wall interior linearly, which is the exact
    steady conduction profile.  ``t_sky`` defaults to the ambient
    temperature (pure series chain).

    Raises
    ------
    SingularSystemError
        If the network is degenerate (zero total conductance somewhere).
    """
    if t_sky is None:
        t_sky = t_ambient
    wall = system.wall
    room = system.room
    u_wall = wall.conductivity / wall.thickness
    k_flow = gap_exchange_coefficient(coeffs, system)
    h_cg = coeffs.h_gap_convective
    h_rg = coeffs.h_gap_radiative
    labels = ("glass-outer", "glass-inner", "gap-air",
              "wall-surface-outer", "wall-surface-inner")
    matrix = np.array([
        [coeffs.h_exterior_convective + coeffs.h_exterior_radiative + coeffs.h_panes,
         -coeffs.h_panes, 0.0, 0.0, 0.0],
        [-coeffs.h_panes, coeffs.h_panes + h_cg + h_rg, -h_cg, -h_rg, 0.0],
        [0.0, -h_cg, k_flow + 2.0 * h_cg, -h_cg, 0.0],
        [0.0, -h_rg, -h_cg, h_cg + h_rg + u_wall, -u_wall],
        [0.0, 0.0, 0.0, -u_wall,
         u_wall + coeffs.h_room_convective + coeffs.h_room_radiative],
    ])
    rhs = np.array([
        coeffs.h_exterior_convective * t_ambient + coeffs.h_exterior_radiative * t_sky,
        0.0,
        k_flow * room.air_temperature,
        q_solar * wall.absorptance_transmittance,
        coeffs.h_room_convective * room.air_temperature
        + coeffs.h_room_radiative * room.mean_radiant_temperature,
    ])
    t_g1, t_g2, t_air, t_w0, t_wd = gaussian_eliminate(matrix, rhs, labels)
    out = np.empty(mesh.node_count)
    out[GLASS_OUTER] = t_g1
    out[GLASS_INNER] = t_g2
    out[GAP_AIR] = t_air
    out[WALL_OUTER:] = t_w0 + (t_wd - t_w0) * mesh.wall_x() / wall.thickness
    return out


def penetration_depth(diffusivity: float, period: float) -> float:
    """Damping depth of a periodic surface temperature, d = sqrt(a P / pi)."""
    omega = 2.0 * math.pi / period
    return math.sqrt(2.0 * diffusivity / omega)


def analytic_transient_slab(
    diffusivity: float,
    period: float,
    amplitude: float,
    mean: float,
    x,
    t: float,
):
    """Periodic conduction into a half-space with a sinusoidal surface.

    T(x, t) = mean + amplitude * exp(-x/d) * cos(w t - x/d)

    with d = sqrt(2 a / w).  Valid on a finite slab as long as the far
    side is effectively undisturbed (thickness >= 4 d) or, for order
    studies, when the far boundary is prescribed from this same solution.
    Accepts scalar or array ``x``.
    """
    omega = 2.0 * math.pi / period
    d = penetration_depth(diffusivity, period)
    x = np.asarray(x, dtype=float)
    value = mean + amplitude * np.exp(-x / d) * np.cos(omega * t - x / d)
    if value.ndim == 0:
        return float(value)
    return value
