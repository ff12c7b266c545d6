"""
Gaussian channels
=================

A one-mode Gaussian channel maps covariance matrices as
``sigma -> X^T sigma X + Y``.  The volume of accessible covariance matrices
changes by ``|det (X^T kron X^T)| = |det X|^4``.
"""

import numpy as np
from scipy.linalg import expm

from nmvolume import GaussianChannel, gaussian_nv, markovian_attenuation
from nmvolume.gaussian_cv import gaussian_trajectory, symplectic_form, vacuum

# Markovian attenuation towards the vacuum: V = exp(-4 Gamma t).
gamma = 0.4
t = np.linspace(0, 5, 6)
traj = gaussian_trajectory([markovian_attenuation(gamma, vacuum(1), s) for s in t])
print(np.c_[t, traj.volumes, np.exp(-4 * gamma * t)])

# Symplectic (unitary) dynamics keeps the volume fixed.
h = np.array([[1.0, 0.3], [0.3, 2.0]])
S = expm(symplectic_form(1) @ h)
chans = [GaussianChannel(np.eye(2), np.zeros((2, 2))), GaussianChannel(S, np.zeros((2, 2)), 1.0)]
print("symplectic volume:", gaussian_trajectory(chans).volumes)

# An oscillating gain a(t) = exp(-t/2) (1 + sin(t)/2): V = a^8 has small revivals.
ts = np.linspace(0, 20, 2001)
a = np.exp(-ts / 2) * (1 + 0.5 * np.sin(ts))
family = [GaussianChannel(x * np.eye(2), np.zeros((2, 2)), s, check=False) for x, s in zip(a, ts)]
res = gaussian_nv(family, growth_threshold=0.0)
print(f"oscillating family: n_v = {res.n_v:.3e} over {len(res.growth_intervals)} windows")
