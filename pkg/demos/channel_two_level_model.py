"""Compare the two descriptions of the vented air channel.

The channel air heats up along its height; marching the transport
equation resolves the exponential profile, while the algebraic reduction
replaces it with the inlet/outlet mean.  For moderate transfer numbers
the two agree to a couple of percent of the temperature rise, which is
what lets the time stepper keep the (linear) algebraic form inside its
matrix and refresh the buoyancy temperature from the march in between.
"""

from trombe import (
    CoefficientSet,
    march_gap_profile,
    reference_system,
    solve_gap_algebraic,
)

system = reference_system()
coeffs = CoefficientSet(
    h_gap_convective=3.0, h_gap_radiative=4.0, h_panes=6.0,
    h_exterior_convective=12.0, h_exterior_radiative=4.0,
    h_room_convective=3.0, h_room_radiative=5.0,
    velocity=0.1 / system.gap.cross_section, volume_flow=0.1,
)

wall_face, glass_face, room_air = 330.0, 310.0, 293.15
marched = march_gap_profile(wall_face, glass_face, room_air, coeffs,
                            system.gap, system.wall, n_nodes=9)
fine = march_gap_profile(wall_face, glass_face, room_air, coeffs,
                         system.gap, system.wall, n_nodes=200)
algebraic = solve_gap_algebraic(wall_face, glass_face, room_air, coeffs,
                                system.gap, system.wall)

print(f"faces at {wall_face:.0f} / {glass_face:.0f} K, inlet {room_air:.2f} K, "
      f"flow {coeffs.volume_flow:.2f} m^3/s\n")
print("marched profile (9 nodes):")
for z, t in marched.profile:
    print(f"  z = {z:4.2f} m   T = {t:7.3f} K")

rise = algebraic.outlet - room_air
gap = abs(fine.outlet - algebraic.outlet)
print(f"\noutlet: march {fine.outlet:.3f} K vs algebraic {algebraic.outlet:.3f} K")
print(f"difference {gap:.3f} K = {gap / rise:.1%} of the {rise:.2f} K rise")
print(f"room gain {algebraic.room_gain_flux:.1f} W per m^2 of wall face")
