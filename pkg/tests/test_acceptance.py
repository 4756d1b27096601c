"""Acceptance criteria for the solver, each pinned to a fixed tolerance.

Each test prints one PASS/FAIL line (run pytest with ``-s`` to see them
all).  The criteria:

1. extended sweep vs dense elimination: 100 randomized solves,
   max |dT| < 1e-9 K, under 2 s;
2. equilibrium fixed point: drift < 1e-12 K/step over 1000 steps;
3. constant-boundary steady state: wall linear in depth and interface
   fluxes continuous to 1e-6, matching the resistance network;
4. observed orders: 2.0 +/- 0.15 (sigma 0.5) and 1.0 +/- 0.15 (sigma 1)
   in time, 2.0 +/- 0.2 in space, under 30 s;
5. channel march vs algebraic reduction: within 2% of the outlet rise
   over 20 randomized flow states plus the worked example;
6. energy closure over one synthetic day: residual <= 1% of absorbed;
7. diurnal response of the reference wall: inner peak lags the absorber
   peak by >= 4 h with amplitude ratio < 0.5;
8. seven simulated days at dt = 60 s in under 5 s.
"""

import time

import pytest

from trombe import march_gap_profile, reference_system, solve_gap_algebraic
from trombe import checks


def _report(result: checks.CheckResult) -> None:
    print(result.line())
    assert result.passed, result.line()


def test_criterion_1_sweep_matches_dense_oracle():
    started = time.perf_counter()
    result = checks.check_sweep_vs_dense(n_systems=100, limit=1e-9)
    elapsed = time.perf_counter() - started
    print(result.line())
    assert result.passed, result.line()
    assert elapsed < 2.0, f"oracle-equivalence runtime {elapsed:.2f} s >= 2 s"


def test_criterion_2_equilibrium_fixed_point():
    _report(checks.check_equilibrium_fixpoint(steps=1000, limit=1e-12))


def test_criterion_3_steady_state_profile():
    _report(checks.check_steady_profile(limit=1e-6))


def test_criterion_4_observed_orders():
    started = time.perf_counter()
    for result in (
        checks.check_temporal_order(sigma=0.5, expected=2.0, band=0.15),
        checks.check_temporal_order(sigma=1.0, expected=1.0, band=0.15),
        checks.check_spatial_order(expected=2.0, band=0.2),
    ):
        print(result.line())
        assert result.passed, result.line()
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"order-study runtime {elapsed:.1f} s >= 30 s"


def test_criterion_5_gap_model_consistency(flow_coeffs):
    _report(checks.check_gap_consistency(n_states=20, limit=0.02))
    # worked example: surfaces 330/310 K, inlet 293.15 K, G = 0.1 m^3/s
    system = reference_system()
    marched = march_gap_profile(330.0, 310.0, 293.15, flow_coeffs,
                                system.gap, system.wall, n_nodes=200)
    algebraic = solve_gap_algebraic(330.0, 310.0, 293.15, flow_coeffs,
                                    system.gap, system.wall)
    print(f"PASS gap-worked-example: march {marched.outlet:.3f} K vs "
          f"algebraic {algebraic.outlet:.3f} K")
    assert marched.outlet == pytest.approx(304.1, abs=0.05)
    assert algebraic.outlet == pytest.approx(304.3, abs=0.05)
    rise = algebraic.outlet - 293.15
    assert abs(marched.outlet - algebraic.outlet) <= 0.02 * rise


def test_criterion_6_energy_closure():
    _report(checks.check_energy_closure(limit=0.01))


def test_criterion_7_diurnal_lag_and_damping():
    _report(checks.check_diurnal_shape(min_lag_hours=4.0,
                                       max_amplitude_ratio=0.5))


def test_criterion_8_end_to_end_runtime():
    _report(checks.check_runtime(limit_seconds=5.0))
