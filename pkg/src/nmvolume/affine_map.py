"""Affine (A, q) representation of trace-preserving maps on Bloch vectors.

A linear map ``phi`` on N x N matrices is written in the generator basis as
``F_ab = Tr[G_a phi(G_b)]``.  Trace preservation fixes the first row of ``F``
to ``(1, 0, ..., 0)``, so the map acts on Bloch vectors as

    r' = A r + q / sqrt(N)

with ``A`` the lower-right block of ``F`` and ``q`` its first column.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .generator_basis import GeneratorBasis

__all__ = [
    "AffineBlochMap",
    "MapDecomposition",
    "map_from_channel",
    "kraus_channel",
    "superoperator_channel",
    "identity_map",
    "apply",
    "volume_factor",
    "decompose",
    "compose",
]

Channel = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class AffineBlochMap:
    """Affine action ``r -> A r + q / sqrt(N)`` at time ``t``."""

    dimension: int
    A: np.ndarray = field(repr=False)
    q: np.ndarray = field(repr=False)
    t: float = 0.0

    def __post_init__(self):
        m = self.dimension**2 - 1
        A = np.array(self.A, dtype=float)
        q = np.array(self.q, dtype=float)
        if A.shape != (m, m) or q.shape != (m,):
            raise ValueError(
                f"N={self.dimension} needs A of shape {(m, m)} and q of length {m}, "
                f"got {A.shape} and {q.shape}"
            )
        A.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "t", float(self.t))

    @property
    def F(self) -> np.ndarray:
        """Full ``N**2 x N**2`` matrix ``(1, 0; q, A)``."""
        m = self.A.shape[0]
        F = np.zeros((m + 1, m + 1))
        F[0, 0] = 1.0
        F[1:, 0] = self.q
        F[1:, 1:] = self.A
        return F

    def to_record(self) -> dict:
        """Plain-dict record: dimension, time, row-major ``A``, ``q``."""
        return {
            "dimension": self.dimension,
            "time": self.t,
            "A": self.A.ravel(order="C").tolist(),
            "q": self.q.tolist(),
        }

    @classmethod
    def from_record(cls, record: dict) -> "AffineBlochMap":
        n = int(record["dimension"])
        m = n * n - 1
        A = np.asarray(record["A"], dtype=float).reshape(m, m)
        return cls(n, A, np.asarray(record["q"], dtype=float), float(record["time"]))

    def dumps(self) -> str:
        return json.dumps(self.to_record())

    @classmethod
    def loads(cls, text: str) -> "AffineBlochMap":
        return cls.from_record(json.loads(text))


@dataclass(frozen=True, eq=False)
class MapDecomposition:
    """``A = O1 @ diag(D) @ O2.T`` plus the translation ``q``."""

    O1: np.ndarray
    D: np.ndarray
    O2: np.ndarray
    q: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.O1 @ np.diag(self.D) @ self.O2.T


def identity_map(n: int, t: float = 0.0) -> AffineBlochMap:
    m = n * n - 1
    return AffineBlochMap(n, np.eye(m), np.zeros(m), t)


def map_from_channel(
    apply_channel: Channel, basis: GeneratorBasis, t: float = 0.0, tol: float = 1e-10
) -> AffineBlochMap:
    """Represent a linear trace-preserving channel as an affine Bloch map.

    ``apply_channel`` must accept arbitrary ``N x N`` complex matrices (it is
    evaluated on the traceless, non-positive generators) and act linearly.

    Args:
        apply_channel: linear action on matrices.
        basis: generator basis fixing the coordinates.
        t: time label stored on the result.
        tol: bound on imaginary residues of ``F``.

    Returns:
        AffineBlochMap: the pair ``(A, q)`` with ``q_i = Tr[G_i phi(G_0)]``.

    Raises:
        ValueError: if the channel maps Hermitian input to non-Hermitian
            output, or does not preserve the trace.
    """
    full = basis.full()
    images = np.array([np.asarray(apply_channel(g), dtype=complex) for g in full])
    n = basis.dimension
    if images.shape != full.shape:
        raise ValueError(f"channel must return {n}x{n} matrices, got {images.shape[1:]}")
    F = np.einsum("aij,bji->ab", full, images)
    if np.abs(F.imag).max() > tol:
        raise ValueError("channel output is not Hermitian for Hermitian input")
    F = F.real
    # first row of F is (Tr phi(G_b)) / sqrt(N); trace preservation means delta_0b
    expected = np.zeros(n * n)
    expected[0] = 1.0
    if np.abs(F[0] - expected).max() > 1e-8:
        raise ValueError(
            f"channel is not trace preserving: Tr phi(I/N) = {F[0, 0]:.10g}, "
            f"max |Tr phi(G_i)| = {np.abs(F[0, 1:]).max(initial=0.0):.3g}"
        )
    return AffineBlochMap(n, F[1:, 1:], F[1:, 0], t)


def kraus_channel(kraus_ops: Sequence[np.ndarray]) -> Channel:
    """Channel ``X -> sum_k K_k X K_k^dagger`` from Kraus operators."""
    ops = np.array([np.asarray(k, dtype=complex) for k in kraus_ops])
    ops_dag = ops.conj().transpose(0, 2, 1)

    def channel(x):
        return np.einsum("kij,jl,klm->im", ops, np.asarray(x, dtype=complex), ops_dag)

    return channel


def superoperator_channel(superop: np.ndarray, order: str = "row") -> Channel:
    """Channel from an ``N**2 x N**2`` superoperator acting on ``vec(X)``.

    Args:
        superop: Liouville-space matrix.
        order: ``"row"`` (C order) or ``"column"`` (Fortran order) vectorization.
    """
    if order not in ("row", "column"):
        raise ValueError(f"order must be 'row' or 'column', got {order!r}")
    superop = np.asarray(superop, dtype=complex)
    d = int(round(np.sqrt(superop.shape[0])))
    if superop.shape != (d * d, d * d):
        raise ValueError(f"superoperator must be square with size N**2, got {superop.shape}")
    fmt = "C" if order == "row" else "F"

    def channel(x):
        vec = np.asarray(x, dtype=complex).reshape(-1, order=fmt)
        return (superop @ vec).reshape(d, d, order=fmt)

    return channel


def apply(m: AffineBlochMap, r) -> np.ndarray:
    """Evolve a Bloch vector: ``r' = A r + q / sqrt(N)``."""
    r = np.asarray(r, dtype=float)
    if r.shape[-1:] != m.q.shape:
        raise ValueError(f"Bloch vector must have length {m.q.size}, got shape {r.shape}")
    return r @ m.A.T + m.q / np.sqrt(m.dimension)


def volume_factor(m: AffineBlochMap) -> float:
    """Contraction factor ``|det A|`` of the accessible-state volume."""
    return float(abs(np.linalg.det(m.A)))


def decompose(m: AffineBlochMap) -> MapDecomposition:
    """Rotation-shrink-rotation form ``A = O1 D O2^T``.

    ``D`` is sorted in descending order. Any reflection is carried by ``O1``,
    so ``det O2 = +1``.
    """
    u, s, vt = np.linalg.svd(m.A)
    v = vt.T
    if np.linalg.det(v) < 0:
        v[:, -1] *= -1
        u[:, -1] *= -1
    return MapDecomposition(u, s, v, m.q.copy())


def compose(later: AffineBlochMap, earlier: AffineBlochMap) -> AffineBlochMap:
    """Map for ``later`` applied after ``earlier``; time label is ``later.t``."""
    if later.dimension != earlier.dimension:
        raise ValueError(
            f"cannot compose maps of dimension {later.dimension} and {earlier.dimension}"
        )
    return AffineBlochMap(
        later.dimension,
        later.A @ earlier.A,
        later.A @ earlier.q + later.q,
        later.t,
    )
