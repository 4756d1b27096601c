"""Energy balance of the air channel between glazing and storage wall.

Two coupled descriptions of the channel are provided:

* a discrete march of the transport equation along the channel height,

      rho G c_p dT/dz = h B (T_w0 - T) + h B (T_g2 - T),  T(0) = inlet,

  integrated node-to-node with an implicit (backward) step that is
  unconditionally stable and sign-preserving, and

* the algebraic reduction obtained by replacing the channel profile with
  the mean of inlet and outlet temperature,

      rho G c_p (T_m - T_r) / (H B) = h (T_w0 - T_ma) + h (T_g2 - T_ma),
      T_ma = (T_m + T_r) / 2,

  which is linear in the outlet temperature T_m and solved exactly.

The time-stepping solver embeds the algebraic form in its linear system
and uses the marched profile to refresh the buoyancy temperature between
fixpoint iterations; the two agree to within a couple of percent of the
driving temperature difference in the normal operating regime.

With vents closed there is no through-flow and the channel air settles at
the conductance-weighted mean of the two facing surfaces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import CoefficientSet, GapSpec, WallSpec


class StagnantFlowError(ValueError):
    """Raised when a through-flow operation is asked to run with no flow."""


@dataclass(frozen=True)
class GapFlowState:
    """Solved channel state for one set of surface temperatures.

    ``mean`` is defined as the arithmetic mean of inlet and outlet (the
    quantity the algebraic reduction is written in), not the integral mean
    of the profile.  ``room_gain_flux`` is the enthalpy the flow delivers
    to the room per square metre of wall face.
    """

    inlet: float                 # K, room air drawn in at the lower vents
    outlet: float                # K, air returned at the upper vents
    mean: float                  # K, (inlet + outlet) / 2
    profile: np.ndarray          # shape (n, 2): columns z [m], T [K]
    volume_flow: float           # m^3/s
    room_gain_flux: float        # W/m^2 of wall face

    def __post_init__(self) -> None:
        if self.mean != 0.5 * (self.inlet + self.outlet):
            raise ValueError("mean must equal (inlet + outlet)/2 exactly")


def _march_outlet(
    t_surface_mean: float,
    inlet: float,
    exchange_per_metre: float,
    height: float,
    n_nodes: int,
) -> float:
    """Outlet temperature of the implicit node-to-node march.

    ``exchange_per_metre`` is 2 h B / (rho G c_p): the inverse length scale
    of the exponential approach toward the surface-mean temperature.
    """
    dz = height / (n_nodes - 1)
    r = exchange_per_metre * dz
    shrink = 1.0 / (1.0 + r)
    pull = (1.0 - shrink) * t_surface_mean  # r*shrink, robust for huge r
    t = inlet
    for _ in range(n_nodes - 1):
        t = t * shrink + pull
    return t


def march_gap_profile(
    t_wall_surface: float,
    t_glass_inner: float,
    inlet: float,
    coeffs: CoefficientSet,
    gap: GapSpec,
    wall: WallSpec,
    n_nodes: int = 50,
) -> GapFlowState:
    """March the channel transport equation from the lower to the upper vent.

    Parameters
    ----------
    t_wall_surface, t_glass_inner : float
        Facing surface temperatures [K], held uniform over the height.
    inlet : float
        Air temperature entering at z = 0 [K].
    coeffs : CoefficientSet
        Must carry a positive volume flow and the channel convection
        coefficient for the current velocity.
    n_nodes : int
        Number of profile nodes (>= 2).  The march is first-order in the
        node spacing and converges to the exponential closed form.

    Raises
    ------
    StagnantFlowError
        If the coefficient set carries no through-flow; a stagnant channel
        is handled by :func:`stagnant_gap_temperature` instead.
    """
    if coeffs.volume_flow <= 0.0:
        raise StagnantFlowError(
            "channel march requires positive volume flow; "
            "use stagnant_gap_temperature for a closed channel"
        )
    if n_nodes < 2:
        raise ValueError(f"n_nodes must be >= 2, got {n_nodes}")
    capacity_flow = gap.air_density * coeffs.volume_flow * gap.air_heat_capacity
    exchange = 2.0 * coeffs.h_gap_convective * wall.width / capacity_flow
    t_surface = 0.5 * (t_wall_surface + t_glass_inner)

    dz = wall.height / (n_nodes - 1)
    r = exchange * dz
    shrink = 1.0 / (1.0 + r)
    pull = (1.0 - shrink) * t_surface  # r*shrink, robust for huge r
    profile = np.empty((n_nodes, 2))
    t = inlet
    profile[0] = (0.0, t)
    for k in range(1, n_nodes):
        t = t * shrink + pull
        profile[k] = (k * dz, t)

    outlet = t
    gain = capacity_flow * (outlet - inlet) / (wall.height * wall.width)
    return GapFlowState(
        inlet=inlet,
        outlet=outlet,
        mean=0.5 * (inlet + outlet),
        profile=profile,
        volume_flow=coeffs.volume_flow,
        room_gain_flux=gain,
    )


def solve_gap_algebraic(
    t_wall_surface: float,
    t_glass_inner: float,
    t_room: float,
    coeffs: CoefficientSet,
    gap: GapSpec,
    wall: WallSpec,
) -> GapFlowState:
    """Solve the mean-temperature reduction of the channel balance exactly.

    The enthalpy rise of the flow equals the convective input from both
    surfaces evaluated at the mean air temperature; linear in the outlet
    temperature.  The returned profile holds the two endpoints only.
    """
    if coeffs.volume_flow <= 0.0:
        raise StagnantFlowError("algebraic channel balance requires positive flow")
    h = coeffs.h_gap_convective
    capacity_flow = gap.air_density * coeffs.volume_flow * gap.air_heat_capacity
    face_area = wall.height * wall.width
    k_flow = capacity_flow / face_area
    denominator = k_flow + h
    if denominator <= 0.0:
        raise ArithmeticError("degenerate channel balance (no exchange, no flow)")
    t_surface_sum = t_wall_surface + t_glass_inner
    outlet = (h * t_surface_sum + (k_flow - h) * t_room) / denominator
    profile = np.array([(0.0, t_room), (wall.height, outlet)])
    return GapFlowState(
        inlet=t_room,
        outlet=outlet,
        mean=0.5 * (t_room + outlet),
        profile=profile,
        volume_flow=coeffs.volume_flow,
        room_gain_flux=k_flow * (outlet - t_room),
    )


def stagnant_gap_temperature(
    t_wall_surface: float,
    t_glass_inner: float,
    h_wall: float,
    h_glass: float | None = None,
) -> float:
    """Equilibrium air temperature of a closed (no-flow) channel.

    The steady air-node balance h_wall (T_w0 - T) + h_glass (T_g2 - T) = 0
    gives the conductance-weighted mean of the facing surfaces.  When
    ``h_glass`` is omitted the wall-side coefficient applies to both sides.
    """
    if h_glass is None:
        h_glass = h_wall
    total = h_wall + h_glass
    if total <= 0.0:
        raise ValueError("at least one channel exchange coefficient must be positive")
    return (h_wall * t_wall_surface + h_glass * t_glass_inner) / total


def gap_convective_gain(state: GapFlowState, gap: GapSpec, wall: WallSpec) -> float:
    """Convective gain delivered to the room per m^2 of wall face [W/m^2].

    Recomputed from the enthalpy rise of the flow; zero whenever there is
    no through-flow or no temperature rise.
    """
    if state.volume_flow <= 0.0:
        return 0.0
    capacity_flow = gap.air_density * state.volume_flow * gap.air_heat_capacity
    return capacity_flow * (state.outlet - state.inlet) / (wall.height * wall.width)
