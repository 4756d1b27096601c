"""Physical configuration and heat-transfer correlations for a vented
Trombe wall.

The system is a south-facing storage wall behind double glazing.  Solar
radiation transmitted by the glazing is absorbed on the blackened outer
wall surface; the channel between glazing and wall drives a thermosiphon
loop through floor- and ceiling-level vents whenever the channel air is
warmer than the room air.

This module holds the immutable component specifications (wall, glazing,
air channel, room) and the coefficient correlations the solver refreshes
every fixpoint iteration:

* linearized radiation exchange   h_r = eps * sigma_B * (T1^2 + T2^2) * (T1 + T2)
* Swinbank clear-sky temperature  T_sky = c * T_a^1.5
* buoyancy velocity of the vented channel (orifice/duct loss form)
* channel convection coefficient, affine in the air velocity

All temperatures are absolute (kelvin); coefficients are W/(m^2 K).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

STEFAN_BOLTZMANN = 5.670374419e-8   # W/(m^2 K^4)
GRAVITY = 9.81                      # m/s^2
SWINBANK_COEFFICIENT = 0.0552       # K^(-1/2), clear-sky default

#: relative tolerance for a user-supplied diffusivity vs conductivity/(density*cp)
_DIFFUSIVITY_RTOL = 1e-12


def _positive(value: float, name: str) -> None:
    if not value > 0.0:
        raise ValueError(f"{name} must be positive, got {value!r}")


def _nonnegative(value: float, name: str) -> None:
    if not value >= 0.0:
        raise ValueError(f"{name} must be >= 0, got {value!r}")


# ---------------------------------------------------------------------------
# Component specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WallSpec:
    """Storage-wall geometry and material properties.

    Parameters
    ----------
    height : float
        Wall height [m].
    width : float
        Wall width [m].
    thickness : float
        Wall thickness [m].
    conductivity : float
        Thermal conductivity [W/(m K)].
    density : float
        Material density [kg/m^3].
    heat_capacity : float
        Specific heat [J/(kg K)].
    absorptance_transmittance : float
        Effective absorptance-transmittance product of the glazing/absorber
        pair: the fraction of incident solar flux deposited on the outer
        wall surface.  Dimensionless, in [0, 1].
    diffusivity : float, optional
        Thermal diffusivity [m^2/s].  Derived as conductivity /
        (density * heat_capacity) when omitted; if supplied it must agree
        with the derived value to within 1e-12 relative.
    """

    height: float
    width: float
    thickness: float
    conductivity: float
    density: float
    heat_capacity: float
    absorptance_transmittance: float
    diffusivity: float | None = None

    def __post_init__(self) -> None:
        _positive(self.height, "height")
        _positive(self.width, "width")
        _positive(self.thickness, "thickness")
        _positive(self.conductivity, "conductivity")
        _positive(self.density, "density")
        _positive(self.heat_capacity, "heat_capacity")
        if not 0.0 <= self.absorptance_transmittance <= 1.0:
            raise ValueError(
                "absorptance_transmittance must lie in [0, 1], got "
                f"{self.absorptance_transmittance!r}"
            )
        derived = self.conductivity / (self.density * self.heat_capacity)
        if self.diffusivity is None:
            object.__setattr__(self, "diffusivity", derived)
        elif abs(self.diffusivity - derived) > _DIFFUSIVITY_RTOL * derived:
            raise ValueError(
                f"diffusivity {self.diffusivity!r} inconsistent with "
                f"conductivity/(density*heat_capacity) = {derived!r}"
            )


@dataclass(frozen=True)
class GlazingSpec:
    """Double-glazing cover and exterior exchange parameters.

    ``inter_pane_conductance`` lumps convection and radiation between the
    two panes into a single coefficient.  ``exterior_convection`` is the
    wind-driven film coefficient on the outer pane; the sky radiation
    coefficient is linearized from the pane and sky temperatures at run
    time.  ``sky_coefficient`` is the Swinbank clear-sky constant in
    T_sky = c * T_a^1.5 and may be retuned for overcast conditions.
    """

    inter_pane_conductance: float = 6.0      # W/(m^2 K)
    glass_emissivity: float = 0.90
    wall_surface_emissivity: float = 0.95
    exterior_convection: float = 12.0        # W/(m^2 K)
    sky_coefficient: float = SWINBANK_COEFFICIENT

    def __post_init__(self) -> None:
        _positive(self.inter_pane_conductance, "inter_pane_conductance")
        for name in ("glass_emissivity", "wall_surface_emissivity"):
            eps = getattr(self, name)
            if not 0.0 < eps <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {eps!r}")
        _nonnegative(self.exterior_convection, "exterior_convection")
        _positive(self.sky_coefficient, "sky_coefficient")


VentSchedule = Union[bool, Callable[[float], bool]]


@dataclass(frozen=True)
class GapSpec:
    """Air channel between glazing and wall, including the vent circuit.

    ``c1`` and ``c2`` are the duct/orifice loss constants of the buoyancy
    velocity expression; the defaults (8 and 2) are typical entrance/exit
    loss values for low vent-to-gap area ratios.  ``vents_open`` is either
    a plain bool or a callable mapping simulation time [s] to bool.

    The channel convection correlation is affine in the air velocity,
    h = still_air_coefficient + velocity_coefficient * V, which is
    continuous at V = 0 and monotone; both constants are configurable.
    """

    depth: float = 0.15                  # m, glazing-to-wall distance
    vent_area: float = 0.30              # m^2, per vent row
    cross_section: float = 0.525         # m^2, channel flow area
    c1: float = 8.0
    c2: float = 2.0
    air_density: float = 1.20            # kg/m^3
    air_heat_capacity: float = 1005.0    # J/(kg K)
    vents_open: VentSchedule = True
    still_air_coefficient: float = 3.0   # W/(m^2 K) at V = 0
    velocity_coefficient: float = 4.0    # W/(m^2 K) per m/s

    def __post_init__(self) -> None:
        _positive(self.depth, "depth")
        _positive(self.vent_area, "vent_area")
        _positive(self.cross_section, "cross_section")
        _positive(self.c1, "c1")
        _positive(self.c2, "c2")
        _positive(self.air_density, "air_density")
        _positive(self.air_heat_capacity, "air_heat_capacity")
        _nonnegative(self.still_air_coefficient, "still_air_coefficient")
        _nonnegative(self.velocity_coefficient, "velocity_coefficient")

    def vents_open_at(self, time: float) -> bool:
        """Evaluate the vent schedule at simulation time [s]."""
        if callable(self.vents_open):
            return bool(self.vents_open(time))
        return bool(self.vents_open)


@dataclass(frozen=True)
class RoomSpec:
    """Room-side boundary: prescribed air and mean-radiant temperatures."""

    air_temperature: float = 293.15           # K
    mean_radiant_temperature: float = 293.15  # K
    convective_coefficient: float = 3.0       # W/(m^2 K)
    radiative_coefficient: float = 5.0        # W/(m^2 K)

    def __post_init__(self) -> None:
        _positive(self.air_temperature, "air_temperature")
        _positive(self.mean_radiant_temperature, "mean_radiant_temperature")
        _nonnegative(self.convective_coefficient, "convective_coefficient")
        _nonnegative(self.radiative_coefficient, "radiative_coefficient")


@dataclass(frozen=True)
class SystemSpec:
    """Bundle of the four component specifications."""

    wall: WallSpec
    glazing: GlazingSpec
    gap: GapSpec
    room: RoomSpec


@dataclass(frozen=True)
class CoefficientSet:
    """Exchange coefficients and channel flow for one solver iteration.

    Instances are snapshots: each fixpoint iteration rebuilds the set from
    the current temperature iterate, and the converged set is stored on
    the resulting state so the next step can form its explicit terms with
    the coefficients that actually produced the previous solution.
    """

    h_gap_convective: float      # channel air <-> each facing surface
    h_gap_radiative: float       # absorber surface <-> inner pane
    h_panes: float               # between the two glass panes
    h_exterior_convective: float
    h_exterior_radiative: float  # outer pane <-> sky
    h_room_convective: float
    h_room_radiative: float
    velocity: float              # m/s, channel air velocity
    volume_flow: float           # m^3/s through the vents

    def __post_init__(self) -> None:
        for name in (
            "h_gap_convective", "h_gap_radiative", "h_panes",
            "h_exterior_convective", "h_exterior_radiative",
            "h_room_convective", "h_room_radiative", "velocity",
            "volume_flow",
        ):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")


# ---------------------------------------------------------------------------
# Coefficient correlations
# ---------------------------------------------------------------------------

def linearized_radiation_coefficient(
    t_hot: float, t_cold: float, eps_effective: float
) -> float:
    """Linearized radiation exchange coefficient between two surfaces.

    h_r = eps * sigma_B * (T1^2 + T2^2) * (T1 + T2), symmetric in the two
    temperatures.  ``eps_effective`` is the effective emittance of the
    surface pair (see :func:`effective_emissivity` for parallel plates).

    Raises
    ------
    ValueError
        If either temperature is not a positive absolute temperature, or
        the emissivity lies outside [0, 1].
    """
    if not (t_hot > 0.0 and t_cold > 0.0):
        raise ValueError(
            f"absolute temperatures must be positive, got {t_hot!r}, {t_cold!r}"
        )
    if not 0.0 <= eps_effective <= 1.0:
        raise ValueError(f"emissivity must lie in [0, 1], got {eps_effective!r}")
    return (
        eps_effective * STEFAN_BOLTZMANN
        * (t_hot * t_hot + t_cold * t_cold) * (t_hot + t_cold)
    )


def effective_emissivity(eps_a: float, eps_b: float) -> float:
    """Effective emittance of two large parallel surfaces facing each other."""
    if not (0.0 < eps_a <= 1.0 and 0.0 < eps_b <= 1.0):
        raise ValueError(f"emissivities must lie in (0, 1], got {eps_a!r}, {eps_b!r}")
    return 1.0 / (1.0 / eps_a + 1.0 / eps_b - 1.0)


def sky_temperature(t_ambient: float, coefficient: float = SWINBANK_COEFFICIENT) -> float:
    """Clear-sky effective temperature, T_sky = c * T_a^1.5 (Swinbank form).

    Monotone in the ambient temperature and below it for all terrestrial
    conditions (T_a < 1/c^2, about 430 K at the default coefficient).
    """
    if not t_ambient > 0.0:
        raise ValueError(f"ambient temperature must be positive, got {t_ambient!r}")
    return coefficient * t_ambient * math.sqrt(t_ambient)


def gap_velocity(gap: GapSpec, wall: WallSpec, t_gap_mean: float, t_room: float) -> float:
    """Buoyancy-driven air velocity in the vented channel [m/s].

    V = sqrt( 2 g H / (c1 (A_gap/A_vent)^2 + c2) * (T_m - T_r) / T_m )

    where T_m is the mean channel air temperature and T_r the room air
    that feeds the lower vents.  For T_m <= T_r the expression has no real
    root; the vents act as a thermal diode and the velocity is clamped to
    zero (no reverse flow).
    """
    if not t_gap_mean > 0.0:
        raise ValueError(f"gap temperature must be positive, got {t_gap_mean!r}")
    if t_gap_mean <= t_room:
        return 0.0
    area_ratio = gap.cross_section / gap.vent_area
    loss = gap.c1 * area_ratio * area_ratio + gap.c2
    return math.sqrt(
        (2.0 * GRAVITY * wall.height / loss) * (t_gap_mean - t_room) / t_gap_mean
    )


def convective_gap_coefficient(velocity: float, gap: GapSpec) -> float:
    """Channel convection coefficient for a given air velocity.

    Returns the configured still-air value at V = 0 and grows linearly
    with velocity; continuous and monotone by construction.
    """
    if velocity < 0.0:
        raise ValueError(f"velocity must be >= 0, got {velocity!r}")
    return gap.still_air_coefficient + gap.velocity_coefficient * velocity


def build_coefficients(
    system: SystemSpec,
    t_glass_outer: float,
    t_glass_inner: float,
    t_wall_outer: float,
    t_sky: float,
    velocity: float,
    vents_open: bool,
) -> CoefficientSet:
    """Assemble the full coefficient set from the current temperatures.

    The radiative coefficients are re-linearized from the temperatures of
    the exchanging surfaces; the channel convection coefficient follows
    the configured velocity correlation.  With vents closed the velocity
    and volume flow are forced to zero regardless of the argument.
    """
    glazing = system.glazing
    gap = system.gap
    room = system.room
    if not vents_open:
        velocity = 0.0
    eps_channel = effective_emissivity(
        glazing.wall_surface_emissivity, glazing.glass_emissivity
    )
    return CoefficientSet(
        h_gap_convective=convective_gap_coefficient(velocity, gap),
        h_gap_radiative=linearized_radiation_coefficient(
            t_wall_outer, t_glass_inner, eps_channel
        ),
        h_panes=glazing.inter_pane_conductance,
        h_exterior_convective=glazing.exterior_convection,
        h_exterior_radiative=linearized_radiation_coefficient(
            t_glass_outer, t_sky, glazing.glass_emissivity
        ),
        h_room_convective=room.convective_coefficient,
        h_room_radiative=room.radiative_coefficient,
        velocity=velocity,
        volume_flow=velocity * gap.cross_section,
    )


def reference_system() -> SystemSpec:
    """Concrete-wall reference configuration (3 m x 3.5 m x 0.3 m).

    Wall properties give a thermal diffusivity of 7e-7 m^2/s, typical of
    dense concrete.  Glazing, channel and room parameters carry the module
    defaults documented in the README.
    """
    return SystemSpec(
        wall=WallSpec(
            height=3.0,
            width=3.5,
            thickness=0.3,
            conductivity=1.4,
            density=2000.0,
            heat_capacity=1000.0,
            absorptance_transmittance=0.75,
        ),
        glazing=GlazingSpec(),
        gap=GapSpec(),
        room=RoomSpec(),
    )
