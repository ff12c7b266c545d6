"""
Markovian master equations
==========================

For a Lindblad generator with constant, positive rates the map is a semigroup
and ``det F_t = exp(-N Tr[gamma] t)``: the volume only ever decays.  Rates
that turn negative for a while are what allow it to grow back.
"""

import numpy as np

from nmvolume import LindbladModel, build_basis, lindblad_propagate, measure_nv
from nmvolume.model_channels import amplitude_damping_model
from nmvolume.volume_measure import VolumeTrajectory

qubit = build_basis(2)
gamma = 0.7
times = np.linspace(0, 5, 11)
maps = lindblad_propagate(amplitude_damping_model(gamma), qubit, times)
for t, m in zip(times, maps):
    print(f"t = {t:3.1f}: det F = {np.linalg.det(m.F):.6e}   exp(-2 gamma t) = {np.exp(-2 * gamma * t):.6e}")

# Dephasing with a time-dependent rate |cos t| + 0.05.  The rate stays
# positive, the map stays divisible, and the volume never grows.  Negative
# rates are rejected by the model.
sz = np.diag([1.0, -1.0]).astype(complex)
model = LindbladModel(np.zeros((2, 2)), [sz], lambda t: np.array([[abs(np.cos(t)) + 0.05]]))
times = np.linspace(0, 10, 201)
traj = VolumeTrajectory.from_maps(lindblad_propagate(model, qubit, times))
print("time-dependent positive rate: n_v =", measure_nv(traj).n_v)
