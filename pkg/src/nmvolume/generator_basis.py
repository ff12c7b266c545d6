"""Orthonormal SU(N) generator basis and generalized Bloch vectors.

The basis is the set of traceless Hermitian matrices
``{u_jk, v_jk, w_l} / sqrt(2)`` normalised so that ``Tr[G_i G_j] = delta_ij``.
Together with ``G_0 = I / sqrt(N)`` it spans all N x N matrices, and any
density matrix is written as ``rho = I/N + sum_i r_i G_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "GeneratorBasis",
    "build_basis",
    "to_bloch",
    "from_bloch",
    "is_physical",
    "check_density_matrix",
    "BASIS_TOL",
    "PHYSICAL_TOL",
]

BASIS_TOL = 1e-12
PHYSICAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class GeneratorBasis:
    """Ordered generator set for an N-level system.

    Attributes:
        dimension: Hilbert-space dimension N.
        generators: array of shape ``(N**2 - 1, N, N)``; the u-block
            (lexicographic in ``(j, k)``), then the v-block, then ``w_1 .. w_{N-1}``.
        labels: human-readable name of each generator, e.g. ``"u12"``.
    """

    dimension: int
    generators: np.ndarray = field(repr=False)
    labels: tuple[str, ...] = field(repr=False)

    def __post_init__(self):
        self.generators.setflags(write=False)

    @property
    def size(self) -> int:
        """Number of traceless generators, ``N**2 - 1``."""
        return self.dimension**2 - 1

    @property
    def identity_element(self) -> np.ndarray:
        """``G_0 = I / sqrt(N)``."""
        return np.eye(self.dimension, dtype=complex) / np.sqrt(self.dimension)

    def full(self) -> np.ndarray:
        """All ``N**2`` basis elements with ``G_0`` prepended."""
        return np.concatenate([self.identity_element[None], self.generators])

    def gram(self) -> np.ndarray:
        """Matrix of ``Tr[G_a G_b]`` over the full basis (should be the identity)."""
        full = self.full()
        return np.einsum("aij,bji->ab", full, full)


def _w_generator(l: int, n: int) -> np.ndarray:
    # |j><j| for j <= l, then -l |l+1><l+1|, outside the sum
    diag = np.zeros(n)
    diag[:l] = 1.0
    diag[l] = -l
    return np.sqrt(2.0 / (l * (l + 1))) * np.diag(diag).astype(complex)


@lru_cache(maxsize=None)
def _build(n: int) -> GeneratorBasis:
    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    mats, labels = [], []
    for j, k in pairs:
        u = np.zeros((n, n), dtype=complex)
        u[j, k] = u[k, j] = 1.0
        mats.append(u)
        labels.append(f"u{j + 1}{k + 1}")
    for j, k in pairs:
        v = np.zeros((n, n), dtype=complex)
        v[j, k] = -1j
        v[k, j] = 1j
        mats.append(v)
        labels.append(f"v{j + 1}{k + 1}")
    for l in range(1, n):
        mats.append(_w_generator(l, n))
        labels.append(f"w{l}")

    gens = np.array(mats) / np.sqrt(2.0)
    basis = GeneratorBasis(n, gens, tuple(labels))

    # self-check at construction: the normalisation of w_l is easy to get wrong
    herm = np.abs(gens - gens.conj().transpose(0, 2, 1)).max()
    traces = np.abs(np.einsum("aii->a", gens)).max()
    gram_err = np.abs(basis.gram() - np.eye(n * n)).max()
    if herm > BASIS_TOL or traces > BASIS_TOL or gram_err > BASIS_TOL:
        raise RuntimeError(
            f"generator basis self-check failed for N={n}: "
            f"hermiticity {herm:.3g}, trace {traces:.3g}, gram {gram_err:.3g}"
        )
    return basis


def build_basis(n: int) -> GeneratorBasis:
    """Return the orthonormal SU(N) generator basis.

    For ``n = 2`` the generators are the Pauli matrices divided by sqrt(2);
    for ``n = 3`` they are the Gell-Mann matrices divided by sqrt(2).

    Args:
        n: Hilbert-space dimension, at least 2.

    Returns:
        GeneratorBasis: cached, read-only basis object.

    Raises:
        ValueError: if ``n < 2``.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
    return _build(int(n))


def check_density_matrix(rho, n: int | None = None, tol: float = BASIS_TOL) -> np.ndarray:
    """Validate Hermiticity and unit trace; return ``rho`` as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if n is not None and rho.shape[0] != n:
        raise ValueError(f"expected a {n}x{n} matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real:.6g}, expected 1")
    return rho


def to_bloch(rho, basis: GeneratorBasis) -> np.ndarray:
    """Generalized Bloch vector ``r_i = Tr[rho G_i]``.

    Args:
        rho: Hermitian, unit-trace ``N x N`` matrix.
        basis: generator basis of matching dimension.

    Returns:
        ndarray: real vector of length ``N**2 - 1``.
    """
    rho = check_density_matrix(rho, basis.dimension)
    r = np.einsum("aij,ji->a", basis.generators, rho)
    if np.abs(r.imag).max() > BASIS_TOL:
        raise ValueError("Bloch components have non-negligible imaginary part")
    return r.real


def from_bloch(r, basis: GeneratorBasis) -> np.ndarray:
    """Rebuild ``rho = I/N + sum_i r_i G_i``.

    The result is Hermitian with unit trace but is not guaranteed to be
    positive; use :func:`is_physical` for that.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (basis.size,):
        raise ValueError(f"Bloch vector must have length {basis.size}, got shape {r.shape}")
    n = basis.dimension
    return np.eye(n, dtype=complex) / n + np.einsum("a,aij->ij", r, basis.generators)


def is_physical(r, basis: GeneratorBasis, tol: float = PHYSICAL_TOL) -> bool:
    """True iff the reconstructed density matrix has no eigenvalue below ``-tol``."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return bool(np.linalg.eigvalsh(from_bloch(r, basis)).min() >= -tol)
