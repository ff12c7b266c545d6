import sys

import numpy as np
import pytest

from nmvolume import build_basis, kraus_channel, map_from_channel


def random_kraus(n, rank, rng):
    """Kraus operators of a random CPTP map from a Haar-ish isometry."""
    g = rng.normal(size=(n * rank, n)) + 1j * rng.normal(size=(n * rank, n))
    v, _ = np.linalg.qr(g)
    return [v[k * n:(k + 1) * n] for k in range(rank)]


def random_density_matrix(n, rng):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_hermitian_unit_trace(n, rng):
    h = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = h + h.conj().T
    return h - (np.trace(h) - 1) * np.eye(n) / n


def random_cptp_map(n, rng, rank=None, t=0.0):
    rank = rank or int(rng.integers(1, n * n + 1))
    return map_from_channel(kraus_channel(random_kraus(n, rank, rng)), build_basis(n), t)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def qubit():
    return build_basis(2)


@pytest.fixture
def qutrit():
    return build_basis(3)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
