"""Gaussian channels on covariance matrices and their volume measure.

Conventions: quadratures ``R = (q_1, p_1, ..., q_n, p_n)`` with
``q = (a + a^+)/sqrt(2)``, so the vacuum covariance matrix is ``I/2`` and a
physical state satisfies ``sigma + i Omega / 2 >= 0``.  A channel acts as
``sigma -> X^T sigma X + Y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import block_diag

from .volume_measure import (
    DEFAULT_GROWTH_THRESHOLD,
    NonMarkovianityResult,
    VolumeTrajectory,
    measure_nv,
)

__all__ = [
    "symplectic_form",
    "vacuum",
    "is_physical_covariance",
    "GaussianChannel",
    "VectorizedGaussianMap",
    "identity_channel",
    "vectorize_channel",
    "apply_gaussian",
    "compose_gaussian",
    "markovian_attenuation",
    "gaussian_trajectory",
    "gaussian_nv",
]

EIG_TOL = 1e-10


def symplectic_form(n: int) -> np.ndarray:
    """``Omega = (+)_k [[0, 1], [-1, 0]]`` for ``n`` modes."""
    return block_diag(*([np.array([[0.0, 1.0], [-1.0, 0.0]])] * n))


def vacuum(n: int) -> np.ndarray:
    return 0.5 * np.eye(2 * n)


def _modes(mat: np.ndarray, name: str) -> int:
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] % 2:
        raise ValueError(f"{name} must be a 2n x 2n matrix, got shape {mat.shape}")
    return mat.shape[0] // 2


def is_physical_covariance(sigma, tol: float = EIG_TOL) -> bool:
    """Symmetric and satisfying the uncertainty relation ``sigma + i Omega/2 >= 0``."""
    sigma = np.asarray(sigma, dtype=float)
    n = _modes(sigma, "sigma")
    if np.abs(sigma - sigma.T).max() > 1e-12:
        return False
    return bool(np.linalg.eigvalsh(sigma + 0.5j * symplectic_form(n)).min() >= -tol)


def _check_covariance(sigma) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=float)
    if not is_physical_covariance(sigma):
        raise ValueError("covariance matrix violates symmetry or the uncertainty relation")
    return sigma


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    """``sigma -> X^T sigma X + Y`` at time ``t``.

    Construction checks the complete-positivity condition
    ``Y + (i/2)(Omega - X^T Omega X) >= 0`` (vacuum ``I/2`` convention).
    Pass ``check=False`` to skip it for synthetic, non-physical families.
    """

    X: np.ndarray = field(repr=False)
    Y: np.ndarray = field(repr=False)
    t: float = 0.0
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        Y = np.array(self.Y, dtype=float)
        n = _modes(X, "X")
        if Y.shape != X.shape:
            raise ValueError(f"Y must have shape {X.shape}, got {Y.shape}")
        if np.abs(Y - Y.T).max() > 1e-12:
            raise ValueError("Y must be symmetric")
        X.setflags(write=False)
        Y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "t", float(self.t))
        if self.check and self.cp_margin() < -EIG_TOL:
            raise ValueError(
                f"channel at t={self.t:g} violates complete positivity "
                f"(min eigenvalue {self.cp_margin():.3g})"
            )

    @property
    def modes(self) -> int:
        return self.X.shape[0] // 2

    def cp_margin(self) -> float:
        """Smallest eigenvalue of the complete-positivity matrix."""
        om = symplectic_form(self.modes)
        m = self.Y + 0.5j * (om - self.X.T @ om @ self.X)
        return float(np.linalg.eigvalsh(m).min())

    def to_record(self) -> dict:
        """Record with time and row-major ``X`` and ``Y``."""
        return {
            "t": self.t,
            "X": self.X.ravel().tolist(),
            "Y": self.Y.ravel().tolist(),
        }

    @classmethod
    def from_record(cls, record: dict, check: bool = True) -> "GaussianChannel":
        X = np.asarray(record["X"], dtype=float)
        d = int(round(np.sqrt(X.size)))
        if d * d != X.size:
            raise ValueError(f"X has {X.size} entries, not a square matrix")
        return cls(
            X.reshape(d, d),
            np.asarray(record["Y"], dtype=float).reshape(d, d),
            float(record["t"]),
            check,
        )


@dataclass(frozen=True, eq=False)
class VectorizedGaussianMap:
    """Affine map ``s -> Xvec s + Yvec`` on row-major ``vec(sigma)``."""

    Xvec: np.ndarray
    Yvec: np.ndarray

    def __call__(self, sigma) -> np.ndarray:
        sigma = np.asarray(sigma, dtype=float)
        d = sigma.shape[0]
        return (self.Xvec @ sigma.ravel() + self.Yvec).reshape(d, d)


def identity_channel(n: int, t: float = 0.0) -> GaussianChannel:
    return GaussianChannel(np.eye(2 * n), np.zeros((2 * n, 2 * n)), t)


def vectorize_channel(ch: GaussianChannel) -> VectorizedGaussianMap:
    """Row-major vectorization: ``vec(X^T sigma X) = (X^T kron X^T) vec(sigma)``.

    Any other orthonormal matrix basis differs from this one by an orthogonal
    change of coordinates, so ``|det Xvec|`` does not depend on the choice.
    """
    return VectorizedGaussianMap(np.kron(ch.X.T, ch.X.T), ch.Y.ravel().copy())


def apply_gaussian(ch: GaussianChannel, sigma) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != ch.X.shape:
        raise ValueError(f"sigma must have shape {ch.X.shape}, got {sigma.shape}")
    out = ch.X.T @ sigma @ ch.X + ch.Y
    return 0.5 * (out + out.T)


def compose_gaussian(later: GaussianChannel, earlier: GaussianChannel) -> GaussianChannel:
    """``later`` after ``earlier``: ``X = X_1 X_2``, ``Y = X_2^T Y_1 X_2 + Y_2``."""
    if later.X.shape != earlier.X.shape:
        raise ValueError("channels act on different numbers of modes")
    X1, Y1, X2, Y2 = earlier.X, earlier.Y, later.X, later.Y
    Y = X2.T @ Y1 @ X2 + Y2
    return GaussianChannel(X1 @ X2, 0.5 * (Y + Y.T), later.t, check=False)


def markovian_attenuation(gamma: float, sigma_inf, t: float) -> GaussianChannel:
    """Relaxation ``sigma_t = e^{-gamma t} sigma_0 + (1 - e^{-gamma t}) sigma_inf``.

    Args:
        gamma: damping rate, >= 0.
        sigma_inf: physical stationary covariance matrix.
        t: time, >= 0.
    """
    if gamma < 0:
        raise ValueError(f"gamma must be non-negative, got {gamma!r}")
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t!r}")
    sigma_inf = _check_covariance(sigma_inf)
    decay = np.exp(-gamma * t)
    d = sigma_inf.shape[0]
    return GaussianChannel(np.sqrt(decay) * np.eye(d), (1 - decay) * sigma_inf, t)


def gaussian_trajectory(channels: Sequence[GaussianChannel], source: str = "") -> VolumeTrajectory:
    """``|det Xvec|`` for each channel of a time-ordered series."""
    channels = list(channels)
    vols = [abs(np.linalg.det(vectorize_channel(ch).Xvec)) for ch in channels]
    return VolumeTrajectory(np.array([ch.t for ch in channels]), np.array(vols), source)


def gaussian_nv(
    channels: Sequence[GaussianChannel],
    growth_threshold: float = DEFAULT_GROWTH_THRESHOLD,
) -> NonMarkovianityResult:
    """Volume-growth measure of a time-ordered series of Gaussian channels."""
    return measure_nv(gaussian_trajectory(channels), growth_threshold)
