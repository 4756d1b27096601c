"""Transient thermal simulation of vented Trombe-wall passive solar systems.

A one-dimensional implicit finite-difference model of the glazing /
air-channel / storage-wall stack, solved per step by a two-pass
elimination extended to the three-unknown coupling at the inner glazing,
with an independent dense reference path and analytic solutions for
verification.
"""

from .airgap import (
    GapFlowState,
    StagnantFlowError,
    gap_convective_gain,
    march_gap_profile,
    solve_gap_algebraic,
    stagnant_gap_temperature,
)
from .climate import (
    ClimateFormatError,
    ClimateSample,
    ClimateSeries,
    february_preset,
    load_climate_csv,
    synthesize_climate,
    write_climate_csv,
)
from .fdm import (
    BoundaryData,
    EnergyBalance,
    Forcing,
    Mesh,
    NumericsConfig,
    SingularSystemError,
    SweepCoefficients,
    ThermalState,
    assemble_interior,
    back_substitute,
    classic_sweep,
    close_inner_surface,
    energy_balance,
    forcing_from_sample,
    forward_sweep,
    initial_state,
    run_slab,
    simulate,
    slab_dirichlet_step,
    stored_energy,
    sweep_step,
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
    convective_gap_coefficient,
    effective_emissivity,
    gap_velocity,
    linearized_radiation_coefficient,
    reference_system,
    sky_temperature,
)
from .oracle import (
    DenseSystem,
    analytic_steady_profile,
    analytic_transient_slab,
    build_dense_system,
    dense_step,
    gaussian_eliminate,
    penetration_depth,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryData",
    "ClimateFormatError",
    "ClimateSample",
    "ClimateSeries",
    "CoefficientSet",
    "DenseSystem",
    "EnergyBalance",
    "Forcing",
    "GapFlowState",
    "GapSpec",
    "GlazingSpec",
    "Mesh",
    "NumericsConfig",
    "RoomSpec",
    "SingularSystemError",
    "StagnantFlowError",
    "SweepCoefficients",
    "SystemSpec",
    "ThermalState",
    "WallSpec",
    "analytic_steady_profile",
    "analytic_transient_slab",
    "assemble_interior",
    "back_substitute",
    "build_coefficients",
    "build_dense_system",
    "classic_sweep",
    "close_inner_surface",
    "convective_gap_coefficient",
    "dense_step",
    "effective_emissivity",
    "energy_balance",
    "february_preset",
    "forcing_from_sample",
    "forward_sweep",
    "gap_convective_gain",
    "gap_velocity",
    "gaussian_eliminate",
    "initial_state",
    "linearized_radiation_coefficient",
    "load_climate_csv",
    "march_gap_profile",
    "penetration_depth",
    "reference_system",
    "run_slab",
    "simulate",
    "sky_temperature",
    "slab_dirichlet_step",
    "solve_gap_algebraic",
    "stagnant_gap_temperature",
    "stored_energy",
    "sweep_step",
    "synthesize_climate",
    "time_step",
    "write_climate_csv",
]
