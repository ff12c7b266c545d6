"""Volume-growth non-Markovianity measure on sampled trajectories.

The measure is the total positive variation of ``V(t) = |det A_t|`` divided by
``V(0)``.  On a time grid this is the sum of the positive increments of ``V``,
which also handles the kinks of ``V`` at the zeros of the map.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .affine_map import AffineBlochMap, volume_factor

__all__ = [
    "VolumeTrajectory",
    "NonMarkovianityResult",
    "growth_intervals",
    "measure_nv",
    "entropy_change",
    "is_volume_monotone",
    "bracket_extrema",
    "DEFAULT_GROWTH_THRESHOLD",
]

DEFAULT_GROWTH_THRESHOLD = 1e-12


@dataclass(frozen=True, eq=False)
class VolumeTrajectory:
    """Sampled ``V(t_k)`` on a strictly increasing time grid."""

    times: np.ndarray
    volumes: np.ndarray
    source: str = ""

    def __post_init__(self):
        t = np.array(self.times, dtype=float)
        v = np.array(self.volumes, dtype=float)
        if t.ndim != 1 or t.shape != v.shape:
            raise ValueError(f"times and volumes must be 1-d of equal length, got {t.shape}, {v.shape}")
        if t.size < 2:
            raise ValueError("a trajectory needs at least two samples")
        if np.any(np.diff(t) <= 0):
            raise ValueError("time grid must be strictly increasing")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ValueError("volumes must be finite and non-negative")
        t.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "volumes", v)

    def __len__(self):
        return self.times.size

    @classmethod
    def from_maps(cls, maps: Iterable[AffineBlochMap], source: str = "") -> "VolumeTrajectory":
        maps = list(maps)
        return cls(
            np.array([m.t for m in maps]),
            np.array([volume_factor(m) for m in maps]),
            source,
        )

    def to_csv(self) -> str:
        """CSV text with header ``t,V``, 17 significant digits."""
        buf = io.StringIO()
        buf.write("t,V\n")
        for t, v in zip(self.times, self.volumes):
            buf.write(f"{t:.17g},{v:.17g}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, source: str = "") -> "VolumeTrajectory":
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames != ["t", "V"]:
            raise ValueError(f"expected CSV header 't,V', got {reader.fieldnames}")
        rows = [(float(row["t"]), float(row["V"])) for row in reader]
        if not rows:
            raise ValueError("trajectory CSV has no rows")
        t, v = zip(*rows)
        return cls(np.array(t), np.array(v), source)


@dataclass(frozen=True)
class NonMarkovianityResult:
    """Outcome of :func:`measure_nv`.

    Attributes:
        n_v: total (normalised) volume growth.
        growth_intervals: ``(t_start, t_end, dV)`` for each maximal run of
            growing grid increments.
        total_decay: sum of the negative increments (non-positive).
        threshold: growth threshold that was applied.
    """

    n_v: float
    growth_intervals: list = field(default_factory=list)
    total_decay: float = 0.0
    threshold: float = DEFAULT_GROWTH_THRESHOLD


def growth_intervals(times: Sequence[float], values: Sequence[float], threshold: float = 0.0):
    """Maximal runs of grid steps where ``values`` grows by more than ``threshold``.

    Returns:
        list of ``(t_start, t_end, increase)`` tuples.
    """
    times = np.asarray(times, dtype=float)
    d = np.diff(np.asarray(values, dtype=float))
    grow = d > threshold
    out = []
    k = 0
    while k < d.size:
        if not grow[k]:
            k += 1
            continue
        start = k
        while k < d.size and grow[k]:
            k += 1
        out.append((float(times[start]), float(times[k]), float(d[start:k].sum())))
    return out


def measure_nv(
    traj: VolumeTrajectory,
    growth_threshold: float = DEFAULT_GROWTH_THRESHOLD,
    normalize: bool = True,
) -> NonMarkovianityResult:
    """Sum of positive volume increments, normalised by ``V(0)``.

    Args:
        traj: sampled volume trajectory.
        growth_threshold: increments at or below this value are treated as
            numerical jitter and ignored.
        normalize: divide by the first sample (``V(0) = 1`` for trajectories
            that start at the identity map, in which case this is a no-op).

    Returns:
        NonMarkovianityResult
    """
    if growth_threshold < 0:
        raise ValueError("growth_threshold must be non-negative")
    v = traj.volumes
    if normalize:
        if v[0] <= 0:
            raise ValueError("cannot normalise a trajectory with V(0) = 0")
        v = v / v[0]
    intervals = growth_intervals(traj.times, v, growth_threshold)
    d = np.diff(v)
    return NonMarkovianityResult(
        n_v=float(sum(iv[2] for iv in intervals)),
        growth_intervals=intervals,
        total_decay=float(d[d < 0].sum()),
        threshold=growth_threshold,
    )


def entropy_change(volume_ratio: float) -> float:
    """Change of differential entropy, in bits, for a volume ratio ``|det A|``.

    A zero ratio means an infinite loss; callers treat that case themselves.
    """
    if not volume_ratio > 0:
        raise ValueError(f"volume ratio must be positive, got {volume_ratio!r}")
    return float(np.log2(volume_ratio))


def is_volume_monotone(traj: VolumeTrajectory, tol: float = 0.0) -> bool:
    """True iff ``V_{k+1} <= V_k + tol`` on every grid step."""
    return bool(np.all(np.diff(traj.volumes) <= tol))


def bracket_extrema(traj: VolumeTrajectory):
    """Grid times bracketing interior local minima and maxima of ``V``.

    Returns:
        dict with keys ``"minima"`` and ``"maxima"``; each is a list of
        ``(t_before, t_after)`` pairs around the sample where the slope
        changes sign.
    """
    d = np.diff(traj.volumes)
    t = traj.times
    out = {"minima": [], "maxima": []}
    for k in range(1, d.size):
        if d[k - 1] < 0 < d[k]:
            out["minima"].append((float(t[k - 1]), float(t[k + 1])))
        elif d[k - 1] > 0 > d[k]:
            out["maxima"].append((float(t[k - 1]), float(t[k + 1])))
    return out
