"""Air-channel kernels: march, algebraic reduction, stagnant balance."""

import math

import numpy as np
import pytest

from trombe import (
    StagnantFlowError,
    gap_convective_gain,
    march_gap_profile,
    solve_gap_algebraic,
    stagnant_gap_temperature,
)

# Worked example: surfaces 330/310 K, inlet 293.15 K, h = 3 both sides,
# B = 3.5 m, H = 3 m, rho = 1.2, c_p = 1005, G = 0.1 m^3/s.
SURFACE_WALL = 330.0
SURFACE_GLASS = 310.0
INLET = 293.15
FLOW = 0.1

# closed form: T(z) = T_s + (inlet - T_s) exp(-k z), T_s = 320,
# k = 2 h B / (rho G c_p)
EXCHANGE_K = 2 * 3.0 * 3.5 / (1.2 * FLOW * 1005.0)
OUTLET_CLOSED_FORM = 320.0 + (INLET - 320.0) * math.exp(-EXCHANGE_K * 3.0)
OUTLET_ALGEBRAIC = 304.2713017751479          # exact linear solve, frozen
FLUX_PER_KELVIN = 11.485714285714286          # rho G c_p / (H B)


class TestMarch:
    def test_equilibrium_profile_constant(self, system, flow_coeffs):
        state = march_gap_profile(293.15, 293.15, 293.15, flow_coeffs,
                                  system.gap, system.wall, n_nodes=40)
        assert state.outlet == pytest.approx(293.15, abs=1e-12)
        assert np.allclose(state.profile[:, 1], 293.15)

    def test_worked_example_against_closed_form(self, system, flow_coeffs):
        state = march_gap_profile(SURFACE_WALL, SURFACE_GLASS, INLET,
                                  flow_coeffs, system.gap, system.wall,
                                  n_nodes=200)
        assert OUTLET_CLOSED_FORM == pytest.approx(304.075, abs=5e-4)
        assert state.outlet == pytest.approx(OUTLET_CLOSED_FORM, abs=0.02)

    def test_first_order_convergence(self, system, flow_coeffs):
        errors = []
        for n in (25, 50, 100, 200):
            state = march_gap_profile(SURFACE_WALL, SURFACE_GLASS, INLET,
                                      flow_coeffs, system.gap, system.wall,
                                      n_nodes=n)
            errors.append(abs(state.outlet - OUTLET_CLOSED_FORM))
        for coarse, fine in zip(errors, errors[1:]):
            ratio = fine / coarse
            assert abs(ratio - 0.5) <= 0.1  # halves within 20%

    def test_high_flow_limit_moves_outlet_toward_inlet(self, system, flow_coeffs):
        from dataclasses import replace
        big = replace(flow_coeffs, volume_flow=10 * FLOW,
                      velocity=10 * flow_coeffs.velocity)
        small = march_gap_profile(SURFACE_WALL, SURFACE_GLASS, INLET,
                                  flow_coeffs, system.gap, system.wall)
        large = march_gap_profile(SURFACE_WALL, SURFACE_GLASS, INLET,
                                  big, system.gap, system.wall)
        assert abs(large.outlet - INLET) < abs(small.outlet - INLET)

    def test_outlet_strictly_between_inlet_and_surface_mean(self, system,
                                                            flow_coeffs, rng):
        for _ in range(50):
            t_wall = rng.uniform(295.0, 350.0)
            t_glass = rng.uniform(295.0, 340.0)
            state = march_gap_profile(t_wall, t_glass, INLET, flow_coeffs,
                                      system.gap, system.wall)
            mean_surface = 0.5 * (t_wall + t_glass)
            assert INLET < state.outlet < mean_surface

    def test_profile_monotone_when_surfaces_above_inlet(self, system, flow_coeffs):
        state = march_gap_profile(SURFACE_WALL, SURFACE_GLASS, INLET,
                                  flow_coeffs, system.gap, system.wall)
        temps = state.profile[:, 1]
        assert np.all(np.diff(temps) > 0.0)

    def test_mean_is_endpoint_average(self, system, flow_coeffs):
        state = march_gap_profile(SURFACE_WALL, SURFACE_GLASS, INLET,
                                  flow_coeffs, system.gap, system.wall)
        assert state.mean == 0.5 * (state.inlet + state.outlet)

    def test_enthalpy_matches_convective_input_integral(self, system, flow_coeffs):
        # the enthalpy rise must equal the z-integral of the convective
        # input along the discrete profile (trapezoid, fine resolution)
        gap = system.gap
        wall = system.wall
        state = march_gap_profile(SURFACE_WALL, SURFACE_GLASS, INLET,
                                  flow_coeffs, gap, wall, n_nodes=200)
        capacity = gap.air_density * state.volume_flow * gap.air_heat_capacity
        enthalpy_rise = capacity * (state.outlet - state.inlet)
        z = state.profile[:, 0]
        temps = state.profile[:, 1]
        t_surface = 0.5 * (SURFACE_WALL + SURFACE_GLASS)
        local_input = 2.0 * flow_coeffs.h_gap_convective * wall.width * (
            t_surface - temps
        )
        integral = np.trapezoid(local_input, z)
        assert abs(enthalpy_rise - integral) <= 0.005 * abs(enthalpy_rise)

    def test_stagnant_flow_rejected(self, system, flow_coeffs):
        from dataclasses import replace
        stagnant = replace(flow_coeffs, volume_flow=0.0, velocity=0.0)
        with pytest.raises(StagnantFlowError):
            march_gap_profile(SURFACE_WALL, SURFACE_GLASS, INLET, stagnant,
                              system.gap, system.wall)

    def test_too_few_nodes_rejected(self, system, flow_coeffs):
        with pytest.raises(ValueError, match="n_nodes"):
            march_gap_profile(SURFACE_WALL, SURFACE_GLASS, INLET, flow_coeffs,
                              system.gap, system.wall, n_nodes=1)


class TestAlgebraic:
    def test_no_driving_difference(self, system, flow_coeffs):
        state = solve_gap_algebraic(INLET, INLET, INLET, flow_coeffs,
                                    system.gap, system.wall)
        assert state.outlet == pytest.approx(INLET, abs=1e-12)

    def test_worked_example_frozen(self, system, flow_coeffs):
        state = solve_gap_algebraic(SURFACE_WALL, SURFACE_GLASS, INLET,
                                    flow_coeffs, system.gap, system.wall)
        assert state.outlet == pytest.approx(OUTLET_ALGEBRAIC, rel=1e-12)
        assert state.outlet == pytest.approx(304.3, abs=0.05)

    def test_agrees_with_march_within_two_percent(self, system, flow_coeffs):
        marched = march_gap_profile(SURFACE_WALL, SURFACE_GLASS, INLET,
                                    flow_coeffs, system.gap, system.wall,
                                    n_nodes=200)
        algebraic = solve_gap_algebraic(SURFACE_WALL, SURFACE_GLASS, INLET,
                                        flow_coeffs, system.gap, system.wall)
        rise = algebraic.outlet - INLET
        assert abs(marched.outlet - algebraic.outlet) <= 0.02 * rise

    def test_linearity_in_driving_differences(self, system, flow_coeffs):
        base = solve_gap_algebraic(SURFACE_WALL, SURFACE_GLASS, INLET,
                                   flow_coeffs, system.gap, system.wall)
        doubled = solve_gap_algebraic(
            INLET + 2 * (SURFACE_WALL - INLET),
            INLET + 2 * (SURFACE_GLASS - INLET),
            INLET, flow_coeffs, system.gap, system.wall,
        )
        assert doubled.outlet - INLET == pytest.approx(
            2.0 * (base.outlet - INLET), rel=1e-12
        )

    def test_gain_formula(self, system, flow_coeffs):
        state = solve_gap_algebraic(SURFACE_WALL, SURFACE_GLASS, INLET,
                                    flow_coeffs, system.gap, system.wall)
        expected = FLUX_PER_KELVIN * (state.outlet - INLET)
        assert state.room_gain_flux == pytest.approx(expected, rel=1e-12)
        assert gap_convective_gain(state, system.gap, system.wall) == \
            pytest.approx(expected, rel=1e-12)

    def test_stagnant_flow_rejected(self, system, flow_coeffs):
        from dataclasses import replace
        stagnant = replace(flow_coeffs, volume_flow=0.0, velocity=0.0)
        with pytest.raises(StagnantFlowError):
            solve_gap_algebraic(SURFACE_WALL, SURFACE_GLASS, INLET, stagnant,
                                system.gap, system.wall)


class TestStagnant:
    def test_equal_coefficients_arithmetic_mean(self):
        assert stagnant_gap_temperature(330.0, 310.0, 3.0) == 320.0

    def test_weighted_mean(self):
        # wall-side conductance three times the glass side
        assert stagnant_gap_temperature(330.0, 310.0, 3.0, 1.0) == 325.0

    def test_identical_surfaces(self):
        assert stagnant_gap_temperature(297.0, 297.0, 2.0, 5.0) == 297.0

    def test_zero_coefficients_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            stagnant_gap_temperature(330.0, 310.0, 0.0, 0.0)


class TestGain:
    def test_zero_when_no_flow(self, system, flow_coeffs):
        from dataclasses import replace
        state = march_gap_profile(SURFACE_WALL, SURFACE_GLASS, INLET,
                                  flow_coeffs, system.gap, system.wall)
        stale = replace(state, volume_flow=0.0)
        assert gap_convective_gain(stale, system.gap, system.wall) == 0.0

    def test_zero_when_no_rise(self, system, flow_coeffs):
        state = solve_gap_algebraic(INLET, INLET, INLET, flow_coeffs,
                                    system.gap, system.wall)
        assert gap_convective_gain(state, system.gap, system.wall) == \
            pytest.approx(0.0, abs=1e-9)
