"""Shared fixtures: reference configuration and solver instances."""

import numpy as np
import pytest

from trombe import (
    CoefficientSet,
    Mesh,
    NumericsConfig,
    reference_system,
)


@pytest.fixture(scope="session")
def system():
    return reference_system()


@pytest.fixture(scope="session")
def mesh(system):
    return Mesh.for_wall(system.wall)


@pytest.fixture(scope="session")
def cfg():
    return NumericsConfig()


@pytest.fixture()
def flow_coeffs():
    """Coefficient set of the worked channel example (G = 0.1 m^3/s, h = 3)."""
    return CoefficientSet(
        h_gap_convective=3.0,
        h_gap_radiative=4.0,
        h_panes=6.0,
        h_exterior_convective=12.0,
        h_exterior_radiative=4.0,
        h_room_convective=3.0,
        h_room_radiative=5.0,
        velocity=0.1 / 0.525,
        volume_flow=0.1,
    )


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(42)
