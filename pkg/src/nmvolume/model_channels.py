"""Channel families used to exercise the volume measure.

* Spontaneous emission of a two-level atom into a Lorentzian (leaky-cavity)
  reservoir, with the closed-form amplitude ``Gamma(t)``.
* Pure dephasing with a decoherence factor ``nu(t)``.
* Lindblad master equations, propagated in the Bloch representation.

Times for the Lorentzian model are in the same units as ``1 / lam``; with the
default ``lam = 1`` the time variable is ``lambda * t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm

from .affine_map import AffineBlochMap, map_from_channel
from .generator_basis import GeneratorBasis, build_basis
from .volume_measure import VolumeTrajectory

__all__ = [
    "LorentzianDecayModel",
    "DephasingModel",
    "LindbladModel",
    "gamma_t",
    "gamma_dot",
    "lorentzian_channel",
    "lorentzian_map",
    "lorentzian_volumes",
    "lorentzian_trajectory",
    "rhp_integrand",
    "dephasing_channel",
    "dephasing_map",
    "dephasing_trajectory",
    "blp_dephasing",
    "lindblad_generator",
    "bloch_generator",
    "lindblad_propagate",
    "lindblad_interval_map",
    "amplitude_damping_model",
    "SIGMA_MINUS",
]

# lowers index 0 (excited) to index 1 (ground)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)


def _check_qubit(basis: GeneratorBasis):
    if basis.dimension != 2:
        raise ValueError(f"this model acts on a qubit; got basis of dimension {basis.dimension}")


# --------------------------------------------------------------------------
# Lorentzian reservoir
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LorentzianDecayModel:
    """Two-level atom coupled to a Lorentzian spectral density.

    Attributes:
        gamma0: coupling strength, > 0.
        lam: spectral width, > 0.
        delta: detuning between atom and cavity centre frequency.
    """

    gamma0: float
    lam: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        if not self.gamma0 > 0:
            raise ValueError(f"gamma0 must be > 0, got {self.gamma0!r}")
        if not self.lam > 0:
            raise ValueError(f"lam must be > 0, got {self.lam!r}")
        if not np.isfinite(self.delta):
            raise ValueError(f"delta must be finite, got {self.delta!r}")

    @property
    def omegas(self) -> tuple[complex, complex]:
        """``(Omega_+, Omega_-)`` using the principal square root."""
        z = self.delta - 1j * self.lam
        s = np.sqrt(z * z + 2 * self.gamma0 * self.lam + 0j)
        return z + s, z - s


def _csinc(x):
    """sin(x)/x for complex x, exact at the removable singularity."""
    x = np.asarray(x, dtype=complex)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    return np.where(small, 1 - x * x / 6 + x**4 / 120, np.sin(safe) / safe)


def gamma_t(model: LorentzianDecayModel, t):
    """Excited-state amplitude ``Gamma(t)``; ``Gamma(0) = 1``.

    Evaluated from ``Omega_+-`` directly. Close to the branch point
    ``Omega_+ = Omega_-`` the equivalent ``cos`` / ``sinc`` form is used.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    op, om = model.omegas
    z = model.delta - 1j * model.lam
    s = (op - om) / 2
    if abs(s) > 1e-6 * (abs(z) + model.gamma0):
        g = (np.exp(-0.5j * t * om) * op - np.exp(-0.5j * t * op) * om) / (2 * (op - z))
    else:
        x = 0.5 * s * t
        g = np.exp(-0.5j * t * z) * (np.cos(x) + 0.5j * z * t * _csinc(x))
    # exact initial condition, free of cancellation error
    g = np.where(t == 0, 1.0 + 0j, g)
    return g[()] if g.ndim == 0 else g


def gamma_dot(model: LorentzianDecayModel, t):
    """Analytic time derivative of :func:`gamma_t`.

    ``Gamma'(t) = -(gamma0 lam t / 2) exp(-i t z / 2) sinc(s t / 2)`` with
    ``z = delta - i lam`` and ``s = (Omega_+ - Omega_-) / 2``.
    """
    t = np.asarray(t, dtype=float)
    op, om = model.omegas
    z = model.delta - 1j * model.lam
    s = (op - om) / 2
    g = -0.5 * model.gamma0 * model.lam * t * np.exp(-0.5j * t * z) * _csinc(0.5 * s * t)
    return g[()] if g.ndim == 0 else g


def lorentzian_channel(model: LorentzianDecayModel, t: float):
    """Action of the reduced atomic dynamics on an arbitrary 2x2 matrix.

    Index 0 is the excited state, index 1 the ground state.
    """
    g = complex(gamma_t(model, t))
    p = abs(g) ** 2

    def channel(x):
        x = np.asarray(x, dtype=complex)
        return np.array(
            [
                [p * x[0, 0], g * x[0, 1]],
                [np.conj(g) * x[1, 0], (1 - p) * x[0, 0] + x[1, 1]],
            ]
        )

    return channel


def lorentzian_map(
    model: LorentzianDecayModel, t: float, basis: GeneratorBasis | None = None
) -> AffineBlochMap:
    """Affine Bloch map of the Lorentzian model at time ``t``.

    ``A`` and ``q`` are obtained from the state-level map rather than typed
    in, so the sign of the translation follows from the chosen level order.
    """
    basis = build_basis(2) if basis is None else basis
    _check_qubit(basis)
    return map_from_channel(lorentzian_channel(model, t), basis, t)


def lorentzian_volumes(model: LorentzianDecayModel, times) -> np.ndarray:
    """``|Gamma(t)|**4`` on a grid (the volume factor of :func:`lorentzian_map`)."""
    return np.abs(gamma_t(model, times)) ** 4


def lorentzian_trajectory(model: LorentzianDecayModel, times) -> VolumeTrajectory:
    times = np.asarray(times, dtype=float)
    src = f"lorentzian(gamma0={model.gamma0:g}, lam={model.lam:g}, delta={model.delta:g})"
    return VolumeTrajectory(times, lorentzian_volumes(model, times), src)


def rhp_integrand(model: LorentzianDecayModel, t):
    """``Re[d/dt ln Gamma(t)] / 2`` from the analytic derivative.

    Where ``Gamma(t) = 0`` the integrand is unbounded and ``nan`` is returned.
    """
    g = np.asarray(gamma_t(model, t), dtype=complex)
    gd = np.asarray(gamma_dot(model, t), dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(g == 0, np.nan, 0.5 * np.real(gd / np.where(g == 0, 1, g)))
    return out[()] if out.ndim == 0 else out


# --------------------------------------------------------------------------
# Pure dephasing
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DephasingModel:
    """Qubit pure dephasing with decoherence factor ``nu(t)``, ``nu(0) = 1``."""

    nu: Callable[[np.ndarray], np.ndarray]
    label: str = "dephasing"

    def __post_init__(self):
        nu0 = complex(np.asarray(self.nu(np.array(0.0))))
        if abs(nu0 - 1) > 1e-12:
            raise ValueError(f"decoherence factor must satisfy nu(0) = 1, got {nu0}")

    def __call__(self, t):
        return np.asarray(self.nu(np.asarray(t, dtype=float)), dtype=complex)

    @classmethod
    def exponential(cls, gamma: float) -> "DephasingModel":
        """``nu(t) = exp(-gamma t)``."""
        return cls(lambda t: np.exp(-gamma * t), f"dephasing(exp, gamma={gamma:g})")

    @classmethod
    def damped_oscillation(cls, gamma: float, omega: float) -> "DephasingModel":
        """``nu(t) = exp(-gamma t) cos(omega t)``; revivals whenever ``cos`` recovers."""
        return cls(
            lambda t: np.exp(-gamma * t) * np.cos(omega * t),
            f"dephasing(damped_oscillation, gamma={gamma:g}, omega={omega:g})",
        )

    @classmethod
    def from_samples(cls, times, values) -> "DephasingModel":
        """Linear interpolation (real and imaginary parts) of sampled ``nu``."""
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=complex)
        if times.shape != values.shape or times.ndim != 1:
            raise ValueError("times and values must be 1-d arrays of equal length")

        def nu(t):
            return np.interp(t, times, values.real) + 1j * np.interp(t, times, values.imag)

        return cls(nu, "dephasing(sampled)")


def dephasing_channel(model: DephasingModel, t: float):
    v = complex(model(t))

    def channel(x):
        x = np.asarray(x, dtype=complex)
        return np.array([[x[0, 0], v * x[0, 1]], [np.conj(v) * x[1, 0], x[1, 1]]])

    return channel


def dephasing_map(
    model: DephasingModel, t: float, basis: GeneratorBasis | None = None
) -> AffineBlochMap:
    basis = build_basis(2) if basis is None else basis
    _check_qubit(basis)
    return map_from_channel(dephasing_channel(model, t), basis, t)


def dephasing_trajectory(model: DephasingModel, times) -> VolumeTrajectory:
    """``|nu(t)|**2`` on a grid."""
    times = np.asarray(times, dtype=float)
    return VolumeTrajectory(times, np.abs(model(times)) ** 2, model.label)


def blp_dephasing(model: DephasingModel, t):
    """Optimal trace distance for pure dephasing, ``|nu(t)|``."""
    return np.abs(model(t))


# --------------------------------------------------------------------------
# Lindblad dynamics
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LindbladModel:
    """Master equation ``L rho = i[rho, H] + sum_ab g_ab (C_a rho C_b^+ - {C_b^+ C_a, rho}/2)``.

    ``rates`` is either a constant PSD matrix or a callable ``t -> matrix``
    for time-dependent (but pointwise PSD) rates.
    """

    hamiltonian: np.ndarray = field(repr=False)
    jump_ops: Sequence[np.ndarray] = field(repr=False)
    rates: np.ndarray | Callable[[float], np.ndarray] = field(repr=False)

    def __post_init__(self):
        h = np.array(self.hamiltonian, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError(f"hamiltonian must be square, got shape {h.shape}")
        if np.abs(h - h.conj().T).max() > 1e-12:
            raise ValueError("hamiltonian must be Hermitian")
        ops = np.array([np.asarray(c, dtype=complex) for c in self.jump_ops]).reshape(-1, *h.shape)
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "jump_ops", ops)
        if not callable(self.rates):
            object.__setattr__(self, "rates", self._checked_rates(self.rates))

    @property
    def dimension(self) -> int:
        return self.hamiltonian.shape[0]

    @property
    def time_dependent(self) -> bool:
        return callable(self.rates)

    def _checked_rates(self, g) -> np.ndarray:
        k = len(self.jump_ops)
        g = np.atleast_2d(np.asarray(g, dtype=complex))
        if g.shape != (k, k):
            raise ValueError(f"rate matrix must be {k}x{k}, got {g.shape}")
        if k == 0:
            return g.reshape(0, 0)
        if np.abs(g - g.conj().T).max() > 1e-12:
            raise ValueError("rate matrix must be Hermitian")
        if np.linalg.eigvalsh(g).min() < -1e-10:
            raise ValueError("rate matrix must be positive semidefinite")
        return g

    def rates_at(self, t: float) -> np.ndarray:
        return self._checked_rates(self.rates(t)) if callable(self.rates) else self.rates


def amplitude_damping_model(gamma: float) -> LindbladModel:
    """Qubit decay ``C = sigma_-`` at rate ``gamma`` with ``H = 0``."""
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    return LindbladModel(np.zeros((2, 2)), [SIGMA_MINUS], [[gamma]])


def lindblad_generator(model: LindbladModel, t: float = 0.0):
    """The superoperator ``L`` at time ``t`` as a function on matrices."""
    h = model.hamiltonian
    c = model.jump_ops
    g = model.rates_at(t)
    c_dag = c.conj().transpose(0, 2, 1)
    # sum_ab g_ab C_b^+ C_a
    anti = np.einsum("ab,bij,ajk->ik", g, c_dag, c)

    def generator(rho):
        rho = np.asarray(rho, dtype=complex)
        out = 1j * (rho @ h - h @ rho) - 0.5 * (anti @ rho + rho @ anti)
        out += np.einsum("ab,aij,jk,bkl->il", g, c, rho, c_dag)
        return out

    return generator


def bloch_generator(model: LindbladModel, basis: GeneratorBasis, t: float = 0.0) -> np.ndarray:
    """Real ``N**2 x N**2`` matrix ``Tr[G_a L(G_b)]`` of the generator."""
    if basis.dimension != model.dimension:
        raise ValueError("basis and model dimensions differ")
    full = basis.full()
    gen = lindblad_generator(model, t)
    images = np.array([gen(x) for x in full])
    L = np.einsum("aij,bji->ab", full, images)
    if np.abs(L.imag).max() > 1e-10:
        raise ValueError("generator does not preserve Hermiticity")
    return L.real


def _magnus4_step(model, basis, t0, h):
    # two-point Gauss-Legendre 4th-order Magnus step
    c = np.sqrt(3) / 6
    a1 = bloch_generator(model, basis, t0 + (0.5 - c) * h)
    a2 = bloch_generator(model, basis, t0 + (0.5 + c) * h)
    omega = 0.5 * h * (a1 + a2) + (np.sqrt(3) / 12) * h * h * (a2 @ a1 - a1 @ a2)
    return expm(omega)


def _as_map(F: np.ndarray, n: int, t: float) -> AffineBlochMap:
    return AffineBlochMap(n, F[1:, 1:], F[1:, 0], t)


def lindblad_interval_map(
    model: LindbladModel,
    basis: GeneratorBasis,
    t_start: float,
    t_end: float,
    max_step: float = 1e-2,
) -> AffineBlochMap:
    """Propagator ``phi_{t_end, t_start}`` as an affine Bloch map."""
    if t_end < t_start:
        raise ValueError("t_end must not precede t_start")
    n = basis.dimension
    if not model.time_dependent:
        return _as_map(expm((t_end - t_start) * bloch_generator(model, basis)), n, t_end)
    F = np.eye(n * n)
    steps = max(1, int(np.ceil((t_end - t_start) / max_step)))
    h = (t_end - t_start) / steps
    for k in range(steps):
        F = _magnus4_step(model, basis, t_start + k * h, h) @ F
    return _as_map(F, n, t_end)


def lindblad_propagate(
    model: LindbladModel,
    basis: GeneratorBasis,
    times,
    max_step: float = 1e-2,
) -> list[AffineBlochMap]:
    """Dynamical maps ``phi_{t, 0}`` on an increasing grid starting at 0.

    Time-independent generators are exponentiated directly at every grid
    time. Time-dependent rates are handled by a time-ordered product of
    fourth-order Magnus steps no longer than ``max_step``.

    Args:
        model: Lindblad model of the same dimension as ``basis``.
        basis: generator basis.
        times: increasing times with ``times[0] == 0``.
        max_step: largest sub-step for time-dependent rates.

    Returns:
        list of AffineBlochMap, one per grid time.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0 or times[0] != 0:
        raise ValueError("times must be a non-empty 1-d grid starting at 0")
    if np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    n = basis.dimension
    if not model.time_dependent:
        L = bloch_generator(model, basis)
        return [_as_map(expm(t * L), n, t) for t in times]

    maps = [_as_map(np.eye(n * n), n, 0.0)]
    F = np.eye(n * n)
    for t0, t1 in zip(times[:-1], times[1:]):
        step = lindblad_interval_map(model, basis, t0, t1, max_step)
        F = step.F @ F
        maps.append(_as_map(F, n, t1))
    return maps
