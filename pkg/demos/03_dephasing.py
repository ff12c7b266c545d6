"""
Pure dephasing and the trace-distance picture
=============================================

For pure dephasing with decoherence factor ``nu(t)`` the volume is
``|nu(t)|^2`` while the optimal trace distance is ``|nu(t)|``.  Both grow on
exactly the same time intervals.
"""

import numpy as np

from nmvolume import DephasingModel, blp_dephasing, measure_nv
from nmvolume.model_channels import dephasing_trajectory
from nmvolume.volume_measure import growth_intervals

t = np.linspace(0, 20, 4000)

markov = DephasingModel.exponential(0.5)
print("exponential nu: n_v =", measure_nv(dephasing_trajectory(markov, t)).n_v)

model = DephasingModel.damped_oscillation(0.1, 1.5)
vol = measure_nv(dephasing_trajectory(model, t))
trace = growth_intervals(t, blp_dephasing(model, t), 1e-12)
print(f"damped oscillation: n_v = {vol.n_v:.4f}")
for (a, b, _), (c, d, _) in zip(vol.growth_intervals, trace):
    print(f"  volume grows on [{a:6.3f}, {b:6.3f}]   trace distance on [{c:6.3f}, {d:6.3f}]")

# A factor measured on a coarse time grid works too; it is interpolated.
samples = np.linspace(0, 20, 41)
measured = DephasingModel.from_samples(samples, np.exp(-0.1 * samples) * np.cos(samples))
print("sampled nu: n_v =", round(measure_nv(dephasing_trajectory(measured, t)).n_v, 4))
