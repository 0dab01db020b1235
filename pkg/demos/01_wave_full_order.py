"""Full-order wave benchmark: energy-conserving time integration.

Builds the semi-discrete wave system u_tt = c^2 u_xx on a periodic unit
interval, integrates it with the average-vector-field scheme, and shows that
the discrete energy stays at its initial value to solver precision.
"""

import numpy as np

from hamrom import AvfScheme, Grid1D, build_wave_fom, integrate, wave_initial

grid = Grid1D(n=500, length=1.0)
flow = build_wave_fom(c=0.1, grid=grid)
u0 = wave_initial(grid)

print(f"wave system: {grid.n} grid points, dx = {grid.dx:g}, state dimension {flow.dim}")

scheme = AvfScheme(dt=0.01, t_end=50.0, snapshot_stride=50)
traj = integrate(flow, u0, scheme)

h = traj.energies
print(f"integrated {traj.steps_total} steps, recorded {traj.times.size} snapshots")
print(f"H(0)      = {h[0]:.8f}   (the continuous value of this profile is 0.075)")
print(f"H(final)  = {h[-1]:.8f}")
print(f"max drift = {np.abs(h - h[0]).max():.3e}   (skew structure + AVF => conserved)")

# the recorded columns are exactly what the reduced-order pipeline consumes
print(f"snapshot matrix shape: {traj.states.shape}")
