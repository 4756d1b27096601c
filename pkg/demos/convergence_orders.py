"""Measure the scheme's observed orders of accuracy on a known solution.

A slab driven by a sinusoidal surface temperature has the classical
damped-travelling-wave solution, which serves as the exact reference.
Halving the time step should roughly quarter the error for the centred
(sigma = 0.5) weighting and halve it for the fully implicit one; halving
the mesh spacing should quarter it in either case.
"""

from trombe.checks import spatial_study, temporal_study

for sigma, expected in ((0.5, 2.0), (1.0, 1.0)):
    dts, errors, order = temporal_study(sigma)
    print(f"time-step refinement at sigma = {sigma:g} "
          f"(expected order {expected:g}, observed {order:.2f})")
    previous = None
    for dt, err in zip(dts, errors):
        note = "" if previous is None else f"  ratio {previous / err:5.2f}"
        print(f"  dt = {dt:6.1f} s   error = {err:9.3e} K{note}")
        previous = err
    print()

dxs, errors, order = spatial_study()
print(f"mesh refinement at sigma = 0.5 (expected order 2, observed {order:.2f})")
previous = None
for dx, err in zip(dxs, errors):
    note = "" if previous is None else f"  ratio {previous / err:5.2f}"
    print(f"  dx = {dx:8.5f} m   error = {err:9.3e} K{note}")
    previous = err
