import numpy as np
import pytest
from scipy.linalg import expm
from scipy.optimize import brentq

from nmvolume.gaussian_cv import (
    GaussianChannel,
    apply_gaussian,
    compose_gaussian,
    gaussian_nv,
    gaussian_trajectory,
    identity_channel,
    is_physical_covariance,
    markovian_attenuation,
    symplectic_form,
    vacuum,
    vectorize_channel,
)


def random_symplectic(n, rng):
    h = rng.normal(size=(2 * n, 2 * n))
    return expm(symplectic_form(n) @ (h + h.T) / 2)


def random_cp_channel(n, rng):
    X = rng.normal(size=(2 * n, 2 * n))
    om = symplectic_form(n)
    gap = np.linalg.eigvalsh(0.5j * (om - X.T @ om @ X)).min()
    Y0 = rng.normal(size=(2 * n, 2 * n))
    Y = Y0 @ Y0.T + max(0.0, -gap) * np.eye(2 * n)
    return GaussianChannel(X, Y)


def random_covariance(n, rng):
    S = random_symplectic(n, rng)
    return S @ np.diag(rng.uniform(0.5, 3, n).repeat(2)) @ S.T


def test_symplectic_form():
    np.testing.assert_array_equal(symplectic_form(1), [[0, 1], [-1, 0]])
    om = symplectic_form(3)
    np.testing.assert_array_equal(om @ om, -np.eye(6))


def test_covariance_physicality():
    assert is_physical_covariance(vacuum(2))
    assert not is_physical_covariance(0.4 * np.eye(2))
    assert is_physical_covariance(np.diag([2.0, 0.125]))
    assert not is_physical_covariance(np.array([[1.0, 0.2], [0.1, 1.0]]))


def test_identity_vectorization():
    v = vectorize_channel(identity_channel(1))
    np.testing.assert_array_equal(v.Xvec, np.eye(4))
    assert np.linalg.det(v.Xvec) == 1
    assert vectorize_channel(identity_channel(2)).Xvec.shape == (16, 16)


def test_vectorized_action_matches_matrix_action(rng):
    for n in (1, 2):
        ch = random_cp_channel(n, rng)
        vec = vectorize_channel(ch)
        for _ in range(20):
            s = random_covariance(n, rng)
            np.testing.assert_allclose(vec(s), ch.X.T @ s @ ch.X + ch.Y, atol=1e-10)


def test_det_identity(rng):
    for n in (1, 2, 3):
        for _ in range(5):
            X = rng.normal(size=(2 * n, 2 * n))
            ch = GaussianChannel(X, np.zeros_like(X), check=False)
            d = abs(np.linalg.det(vectorize_channel(ch).Xvec))
            assert d == pytest.approx(abs(np.linalg.det(X)) ** (4 * n), rel=1e-9)


def test_attenuation_baseline():
    ch = markovian_attenuation(1.0, vacuum(1), 1.0)
    assert abs(np.linalg.det(vectorize_channel(ch).Xvec)) == pytest.approx(np.exp(-4), abs=1e-12)
    assert np.exp(-4) == pytest.approx(0.0183156, abs=1e-7)
    t0 = markovian_attenuation(0.7, vacuum(1), 0.0)
    np.testing.assert_array_equal(t0.X, np.eye(2))
    np.testing.assert_array_equal(t0.Y, 0)


def test_attenuation_fixed_points(rng):
    sigma_inf = np.diag([1.5, 0.8])
    late = markovian_attenuation(1.0, sigma_inf, 40.0)
    np.testing.assert_allclose(apply_gaussian(late, random_covariance(1, rng)), sigma_inf, atol=1e-8)
    for t in (0.1, 1.0, 5.0):
        out = apply_gaussian(markovian_attenuation(2.0, vacuum(1), t), vacuum(1))
        np.testing.assert_allclose(out, vacuum(1), atol=1e-15)


def test_attenuation_arithmetic():
    out = apply_gaussian(markovian_attenuation(1.0, vacuum(1), 1.0), np.diag([2.0, 0.5]))
    expected = np.exp(-1) * np.diag([2.0, 0.5]) + (1 - np.exp(-1)) * 0.5 * np.eye(2)
    np.testing.assert_allclose(out, expected, atol=1e-15)


def test_attenuation_is_cp_for_physical_stationary_state(rng):
    for t in np.linspace(0, 5, 11):
        for sigma_inf in (vacuum(1), random_covariance(1, rng), vacuum(2)):
            assert markovian_attenuation(0.9, sigma_inf, t).cp_margin() >= -1e-10


def test_attenuation_errors():
    with pytest.raises(ValueError):
        markovian_attenuation(-1.0, vacuum(1), 1.0)
    with pytest.raises(ValueError):
        markovian_attenuation(1.0, 0.1 * np.eye(2), 1.0)
    with pytest.raises(ValueError):
        markovian_attenuation(1.0, vacuum(1), -1.0)


def test_cp_violation_rejected():
    # amplification without added noise is not a valid channel
    with pytest.raises(ValueError):
        GaussianChannel(2 * np.eye(2), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        GaussianChannel(np.eye(2), np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_apply_preserves_physicality(rng):
    for n in (1, 2):
        for _ in range(10):
            ch = random_cp_channel(n, rng)
            out = apply_gaussian(ch, random_covariance(n, rng))
            np.testing.assert_allclose(out, out.T)
            assert is_physical_covariance(out, tol=1e-9)
    with pytest.raises(ValueError):
        apply_gaussian(identity_channel(1), np.eye(4))


def test_composition_order_and_cp(rng):
    for n in (1, 2):
        c1, c2 = random_cp_channel(n, rng), random_cp_channel(n, rng)
        both = compose_gaussian(c2, c1)
        s = random_covariance(n, rng)
        np.testing.assert_allclose(apply_gaussian(both, s), apply_gaussian(c2, apply_gaussian(c1, s)), atol=1e-9)
        assert both.cp_margin() >= -1e-9


def test_symplectic_channels_preserve_volume(rng):
    for n in (1, 2):
        for _ in range(10):
            S = random_symplectic(n, rng)
            ch = GaussianChannel(S, np.zeros((2 * n, 2 * n)))
            assert abs(np.linalg.det(vectorize_channel(ch).Xvec)) == pytest.approx(1.0, abs=1e-10)


def test_gaussian_nv_families(rng):
    t = np.linspace(0, 10, 400)
    att = [markovian_attenuation(0.5, vacuum(1), x) for x in t]
    assert gaussian_nv(att).n_v == 0
    # unitary family: rotations by angle t
    rot = [GaussianChannel(np.array([[np.cos(x), np.sin(x)], [-np.sin(x), np.cos(x)]]), np.zeros((2, 2)), x) for x in t]
    traj = gaussian_trajectory(rot)
    np.testing.assert_allclose(traj.volumes, 1, atol=1e-12)
    assert gaussian_nv(rot).n_v == 0


def oscillating_family(t):
    a = np.exp(-t / 2) * (1 + 0.5 * np.sin(t))
    return [GaussianChannel(x * np.eye(2), np.zeros((2, 2)), s, check=False) for x, s in zip(a, t)]


def test_oscillating_family_matches_increment_oracle():
    t = np.linspace(0, 20, 2001)
    # the revivals sit at V ~ 1e-10, so no jitter threshold
    res = gaussian_nv(oscillating_family(t), growth_threshold=0.0)
    # |det(X kron X)| = (det X)^4 = a^8 for X = a * I_2
    v = (np.exp(-t / 2) * (1 + 0.5 * np.sin(t))) ** 8
    d = np.diff(v)
    assert res.n_v > 0
    assert res.n_v == pytest.approx(d[d > 0].sum(), abs=1e-12, rel=1e-12)


def test_oscillating_family_against_analytic_windows():
    # d ln V / dt > 0  <=>  cos t > 1 + sin(t) / 2, i.e. on (t_k, 2 pi k)
    f = lambda x: np.cos(x) - 1 - 0.5 * np.sin(x)
    v = lambda x: (np.exp(-x / 2) * (1 + 0.5 * np.sin(x))) ** 8
    starts = [brentq(f, 2 * np.pi * k - 1.5, 2 * np.pi * k - 1e-3) for k in (1, 2, 3)]
    exact = sum(v(2 * np.pi * k) - v(a) for k, a in zip((1, 2, 3), starts))
    t = np.linspace(0, 20, 20001)
    res = gaussian_nv(oscillating_family(t), growth_threshold=0.0)
    assert res.n_v == pytest.approx(exact, rel=1e-4)
    step = t[1] - t[0]
    for (a, b, _), s, k in zip(res.growth_intervals, starts, (1, 2, 3)):
        assert abs(a - s) <= step and abs(b - 2 * np.pi * k) <= step


def test_channel_record_round_trip(rng):
    ch = random_cp_channel(2, rng)
    back = GaussianChannel.from_record(ch.to_record())
    np.testing.assert_array_equal(back.X, ch.X)
    np.testing.assert_array_equal(back.Y, ch.Y)
