"""
Bloch vectors and affine maps
=============================

Every N-level density matrix is a real vector of generator expectation values,
and every channel acts on that vector as ``r -> A r + q / sqrt(N)``.
"""

import numpy as np

from nmvolume import build_basis, from_bloch, kraus_channel, map_from_channel, to_bloch, volume_factor

# The qubit basis is the Pauli matrices over sqrt(2); for a qutrit we get the
# eight Gell-Mann matrices, again over sqrt(2).
qubit = build_basis(2)
print(qubit.labels)
print(np.round(qubit.gram(), 12))

# A pure state sits on the sphere of radius sqrt((N-1)/N).
rho = np.array([[1, 0], [0, 0]], dtype=complex)
r = to_bloch(rho, qubit)
print("excited state:", r, "norm", np.linalg.norm(r))
assert np.allclose(from_bloch(r, qubit), rho)

# Amplitude damping with decay probability p: the sphere shrinks to an
# ellipsoid shifted towards the ground state.
p = 0.5
kraus = [np.array([[np.sqrt(1 - p), 0], [0, 1]]), np.array([[0, 0], [np.sqrt(p), 0]])]
m = map_from_channel(kraus_channel(kraus), qubit)
print("A =\n", np.round(m.A, 6))
print("q =", np.round(m.q, 6))

# The accessible volume shrinks by |det A| = (1-p)^2.
print("volume factor:", volume_factor(m))
