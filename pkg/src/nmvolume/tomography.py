"""Estimating ``|det A_t|`` from state tomography of a few evolved states.

Prepare the maximally mixed state and ``N**2 - 1`` states whose Bloch vectors
are ``c e_i``, evolve them, and reconstruct their Bloch vectors.  With
``P_t`` the evolved vectors as columns and ``Q_t`` the evolved mixed state
repeated in every column,

    det[(P_t - Q_t)(P_t - Q_t)^T] = det(A_t)^2 det(P_0)^2,

so the volume factor follows from tomographic data alone.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .affine_map import AffineBlochMap, apply
from .generator_basis import GeneratorBasis, build_basis, from_bloch, is_physical
from .volume_measure import (
    DEFAULT_GROWTH_THRESHOLD,
    NonMarkovianityResult,
    VolumeTrajectory,
    measure_nv,
)

__all__ = [
    "TomographyPlan",
    "TomographyRecord",
    "make_plan",
    "simulate_record",
    "simulate_records",
    "estimate_volume",
    "estimate_trajectory",
    "estimate_nv_from_records",
    "plan_is_physical",
]


@dataclass(frozen=True, eq=False)
class TomographyPlan:
    """Initial preparations: the columns of ``P_0`` plus the mixed state.

    Attributes:
        basis: generator basis.
        scale: largest ``c`` keeping every ``I/N + c G_i`` positive.
        vectors: ``P_0`` (columns are the prepared Bloch vectors).
    """

    basis: GeneratorBasis = field(repr=False)
    scale: float
    vectors: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    @property
    def det_p0(self) -> float:
        return float(np.linalg.det(self.vectors))


@dataclass(frozen=True, eq=False)
class TomographyRecord:
    """Reconstructed Bloch vectors at time ``t``.

    ``shots`` is ``None`` for exact (noiseless) data.
    """

    t: float
    evolved: np.ndarray = field(repr=False)
    mixed_image: np.ndarray = field(repr=False)
    shots: int | None = None
    seed: int | None = None

    def __post_init__(self):
        ev = np.array(self.evolved, dtype=float)
        mi = np.array(self.mixed_image, dtype=float)
        if ev.ndim != 2 or ev.shape[0] != ev.shape[1] or mi.shape != (ev.shape[0],):
            raise ValueError(
                f"evolved must be m x m and mixed_image length m, got {ev.shape} and {mi.shape}"
            )
        object.__setattr__(self, "evolved", ev)
        object.__setattr__(self, "mixed_image", mi)

    def to_record(self) -> dict:
        """Plain dict; evolved vectors are stored column-major."""
        return {
            "time": self.t,
            "shots": self.shots,
            "seed": self.seed,
            "evolved": self.evolved.ravel(order="F").tolist(),
            "mixed_image": self.mixed_image.tolist(),
        }

    @classmethod
    def from_record(cls, record: dict) -> "TomographyRecord":
        mi = np.asarray(record["mixed_image"], dtype=float)
        m = mi.size
        ev = np.asarray(record["evolved"], dtype=float).reshape((m, m), order="F")
        return cls(float(record["time"]), ev, mi, record.get("shots"), record.get("seed"))

    def dumps(self) -> str:
        return json.dumps(self.to_record())

    @classmethod
    def loads(cls, text: str) -> "TomographyRecord":
        return cls.from_record(json.loads(text))


def _min_eig_along_axes(basis: GeneratorBasis, c: float) -> float:
    n = basis.dimension
    mats = np.eye(n) / n + c * basis.generators
    return float(np.linalg.eigvalsh(mats).min())


def make_plan(n: int, basis: GeneratorBasis | None = None, tol: float = 1e-10) -> TomographyPlan:
    """Canonical plan ``P_0 = c I`` with the largest physical ``c``.

    ``c`` is located by bisection on the smallest eigenvalue over all
    ``I/N + c G_i`` and the lower (physical) end of the bracket is returned.
    """
    basis = build_basis(n) if basis is None else basis
    if basis.dimension != n:
        raise ValueError("basis dimension does not match n")
    lo, hi = 0.0, 1.0
    # 1/N - 1/sqrt(2) < 0 for any N >= 2, so hi = 1 is unphysical
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _min_eig_along_axes(basis, mid) >= 0:
            lo = mid
        else:
            hi = mid
    return TomographyPlan(basis, lo, lo * np.eye(basis.size))


def _noisy_bloch(r: np.ndarray, basis: GeneratorBasis, shots: int, rng) -> np.ndarray:
    if basis.dimension == 2:
        # projective Pauli measurement per axis; outcomes are +-1/sqrt(2)
        p_up = np.clip(0.5 * (1 + np.sqrt(2) * r), 0.0, 1.0)
        ups = rng.binomial(shots, p_up)
        return (2 * ups / shots - 1) / np.sqrt(2)
    rho = from_bloch(r, basis)
    second = np.einsum("aij,ajk,ki->a", basis.generators, basis.generators, rho).real
    var = np.clip(second - r**2, 0.0, None)
    return r + rng.normal(0.0, np.sqrt(var / shots))


def simulate_record(
    plan: TomographyPlan,
    m: AffineBlochMap,
    shots: int | None = None,
    seed: int | None = 0,
) -> TomographyRecord:
    """Tomographic data for one time, exact or with finite statistics.

    For a qubit every Bloch component is the mean of ``shots`` binomial
    ``+-1/sqrt(2)`` outcomes. For ``N > 2`` a Gaussian error with the variance
    of the generator observable is added instead.

    Args:
        plan: preparations.
        m: dynamical map at the record time.
        shots: measurements per generator axis; ``None`` or ``inf`` for exact data.
        seed: RNG seed, stored on the record.
    """
    if m.dimension != plan.dimension:
        raise ValueError("map and plan dimensions differ")
    if shots is not None and math.isinf(shots):
        shots = None
    if shots is not None and (int(shots) != shots or shots <= 0):
        raise ValueError(f"shots must be a positive integer, got {shots!r}")
    evolved = apply(m, plan.vectors.T).T
    mixed = apply(m, np.zeros(plan.basis.size))
    if shots is None:
        return TomographyRecord(m.t, evolved, mixed, None, seed)
    shots = int(shots)
    rng = np.random.default_rng(seed)
    noisy = np.column_stack([_noisy_bloch(col, plan.basis, shots, rng) for col in evolved.T])
    noisy_mixed = _noisy_bloch(mixed, plan.basis, shots, rng)
    return TomographyRecord(m.t, noisy, noisy_mixed, shots, seed)


def simulate_records(
    plan: TomographyPlan,
    maps: Sequence[AffineBlochMap],
    shots: int | None = None,
    seed: int = 0,
) -> list[TomographyRecord]:
    """One record per map; record ``k`` uses seed ``seed + k``."""
    return [simulate_record(plan, m, shots, seed + k) for k, m in enumerate(maps)]


def estimate_volume(record: TomographyRecord, plan: TomographyPlan) -> float:
    """``sqrt(det[(P_t - Q_t)(P_t - Q_t)^T]) / |det P_0|``."""
    if record.evolved.shape != plan.vectors.shape:
        raise ValueError("record and plan dimensions differ")
    det_p0 = abs(plan.det_p0)
    if det_p0 == 0:
        raise RuntimeError("singular preparation matrix")
    M = record.evolved - record.mixed_image[:, None]
    gram_det = np.linalg.det(M @ M.T)
    return float(np.sqrt(max(gram_det, 0.0)) / det_p0)


def estimate_trajectory(records: Sequence[TomographyRecord], plan: TomographyPlan) -> VolumeTrajectory:
    return VolumeTrajectory(
        np.array([r.t for r in records]),
        np.array([estimate_volume(r, plan) for r in records]),
        "tomography",
    )


def estimate_nv_from_records(
    records: Sequence[TomographyRecord],
    plan: TomographyPlan,
    growth_threshold: float = DEFAULT_GROWTH_THRESHOLD,
) -> NonMarkovianityResult:
    """Volume measure from tomographic records.

    With finite shots, pick ``growth_threshold`` above the statistical spread
    of the estimates (about three standard deviations of repeated runs).
    """
    return measure_nv(estimate_trajectory(records, plan), growth_threshold)


def plan_is_physical(plan: TomographyPlan, tol: float = 1e-10) -> bool:
    """Every prepared state (and the mixed state) is a valid density matrix."""
    return all(is_physical(col, plan.basis, tol) for col in plan.vectors.T)
