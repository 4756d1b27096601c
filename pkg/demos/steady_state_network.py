"""Validate the time stepper against the exact steady resistance network.

With constant boundaries (cold night, no sun, vents closed) the wall must
relax to the profile of the series resistance chain: linear inside the
wall, with every interface passing the same flux.  The network solution
is computed independently of the time-stepping code path.
"""

import numpy as np

from trombe import Mesh, analytic_steady_profile
from trombe.checks import run_to_steady, steady_scenario
from trombe.fdm import GAP_AIR, GLASS_INNER, GLASS_OUTER, WALL_OUTER

system, forcing = steady_scenario()
mesh = Mesh.for_wall(system.wall, wall_nodes=13)

state = run_to_steady(system, forcing, mesh)
network = analytic_steady_profile(state.coeffs, system, mesh,
                                  forcing.t_ambient, forcing.t_sky)

names = {GLASS_OUTER: "outer glass", GLASS_INNER: "inner glass",
         GAP_AIR: "channel air", WALL_OUTER: "absorber surface",
         mesh.wall_inner: "room-side surface"}
print(f"{'node':22s} {'stepped [K]':>12s} {'network [K]':>12s}")
for idx in range(mesh.node_count):
    label = names.get(idx, f"wall x={mesh.dx * (idx - WALL_OUTER):.3f} m")
    print(f"{label:22s} {state.temperatures[idx]:12.6f} {network[idx]:12.6f}")

print(f"\nmax |stepped - network| = "
      f"{np.max(np.abs(state.temperatures - network)):.2e} K")

wall = state.temperatures[WALL_OUTER:]
flux = system.wall.conductivity * np.diff(wall) / mesh.dx
print(f"conductive flux across the wall cells: "
      f"{flux.min():.6f} .. {flux.max():.6f} W/m^2 (uniform at steady state)")
