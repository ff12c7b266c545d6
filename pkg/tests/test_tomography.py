import numpy as np
import pytest
from scipy.stats import ortho_group

from nmvolume import (
    AffineBlochMap,
    LorentzianDecayModel,
    build_basis,
    gamma_t,
    identity_map,
    lorentzian_map,
    measure_nv,
    volume_factor,
)
from nmvolume.model_channels import lorentzian_trajectory
from nmvolume.tomography import (
    TomographyPlan,
    TomographyRecord,
    estimate_nv_from_records,
    estimate_volume,
    make_plan,
    plan_is_physical,
    simulate_record,
    simulate_records,
)

from conftest import random_cptp_map


def closed_form_scale(n):
    """Largest c with I/N + c G_i >= 0, generator by generator."""
    gens = build_basis(n).generators
    return min((1 / n) / -np.linalg.eigvalsh(g).min() for g in gens)


def test_qubit_plan():
    plan = make_plan(2)
    assert plan.scale == pytest.approx(1 / np.sqrt(2), abs=1e-10)
    assert plan.scale <= 1 / np.sqrt(2)
    assert plan.det_p0 == pytest.approx(plan.scale**3)
    assert plan_is_physical(plan)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_higher_dimensional_plans(n):
    plan = make_plan(n)
    assert plan.scale == pytest.approx(closed_form_scale(n), abs=1e-10)
    assert plan_is_physical(plan)
    np.testing.assert_allclose(plan.vectors, plan.scale * np.eye(n * n - 1))
    assert plan.det_p0 == pytest.approx(plan.scale ** (n * n - 1), rel=1e-12)


def test_qutrit_scale_value():
    assert make_plan(3).scale == pytest.approx(1 / np.sqrt(6), abs=1e-10)


def test_noiseless_identity_record():
    plan = make_plan(2)
    rec = simulate_record(plan, identity_map(2))
    np.testing.assert_allclose(rec.evolved, plan.vectors)
    np.testing.assert_allclose(rec.mixed_image, 0)
    assert estimate_volume(rec, plan) == pytest.approx(1.0, abs=1e-12)
    assert simulate_record(plan, identity_map(2), shots=float("inf")).shots is None


def test_depolarizing_record():
    plan = make_plan(2)
    m = AffineBlochMap(2, 0.4 * np.eye(3), np.zeros(3))
    rec = simulate_record(plan, m)
    np.testing.assert_allclose(rec.evolved, 0.4 * plan.vectors)
    assert estimate_volume(rec, plan) == pytest.approx(0.4**3)


def test_collapsing_map():
    plan = make_plan(2)
    m = AffineBlochMap(2, np.zeros((3, 3)), np.array([0.1, 0.2, 0.3]))
    assert estimate_volume(simulate_record(plan, m), plan) == 0


def test_good_cavity_record_columns(qubit):
    model = LorentzianDecayModel(10.0)
    plan = make_plan(2)
    g = gamma_t(model, 1.0)
    rec = simulate_record(plan, lorentzian_map(model, 1.0, qubit))
    c = plan.scale
    shift = np.array([0, 0, (abs(g) ** 2 - 1) / np.sqrt(2)])
    np.testing.assert_allclose(rec.mixed_image, shift, atol=1e-14)
    np.testing.assert_allclose(rec.evolved[:, 0], c * np.array([g.real, -g.imag, 0]) + shift, atol=1e-14)
    np.testing.assert_allclose(rec.evolved[:, 1], c * np.array([g.imag, g.real, 0]) + shift, atol=1e-14)
    np.testing.assert_allclose(rec.evolved[:, 2], c * np.array([0, 0, abs(g) ** 2]) + shift, atol=1e-14)
    for t in (0.3, 1.0, 2.5):
        rec = simulate_record(plan, lorentzian_map(model, t, qubit))
        assert estimate_volume(rec, plan) == pytest.approx(abs(gamma_t(model, t)) ** 4, abs=1e-10)


@pytest.mark.parametrize("n,count", [(2, 50), (3, 50)])
def test_oracle_equivalence(n, count, rng):
    plan = make_plan(n)
    for _ in range(count):
        m = random_cptp_map(n, rng)
        assert estimate_volume(simulate_record(plan, m), plan) == pytest.approx(volume_factor(m), abs=1e-10)


@pytest.mark.parametrize("n", [2, 3])
def test_basis_independence(n, rng):
    base = make_plan(n)
    R = ortho_group.rvs(n * n - 1, random_state=rng)
    rotated = TomographyPlan(base.basis, base.scale, base.scale * R)
    assert abs(rotated.det_p0) == pytest.approx(abs(base.det_p0), rel=1e-12)
    for _ in range(10):
        m = random_cptp_map(n, rng)
        a = estimate_volume(simulate_record(base, m), base)
        b = estimate_volume(simulate_record(rotated, m), rotated)
        assert a == pytest.approx(b, abs=1e-10)


def test_translation_cancels(rng):
    plan = make_plan(3)
    rec = simulate_record(plan, random_cptp_map(3, rng))
    shift = rng.normal(size=8)
    moved = TomographyRecord(rec.t, rec.evolved + shift[:, None], rec.mixed_image + shift)
    a, b = estimate_volume(rec, plan), estimate_volume(moved, plan)
    # identical up to rounding of the shifted entries
    assert abs(a - b) <= 1e-14


def test_finite_shot_reproducibility(qubit):
    plan = make_plan(2)
    m = lorentzian_map(LorentzianDecayModel(10.0), 1.5, qubit)
    a = simulate_record(plan, m, shots=1000, seed=7)
    b = simulate_record(plan, m, shots=1000, seed=7)
    c = simulate_record(plan, m, shots=1000, seed=8)
    np.testing.assert_array_equal(a.evolved, b.evolved)
    assert not np.array_equal(a.evolved, c.evolved)
    assert a.seed == 7 and a.shots == 1000


def test_shot_validation():
    plan = make_plan(2)
    for bad in (0, -5, 2.5):
        with pytest.raises(ValueError):
            simulate_record(plan, identity_map(2), shots=bad)
    with pytest.raises(ValueError):
        simulate_record(plan, identity_map(3))


def test_qubit_noise_is_binomial():
    plan = make_plan(2)
    m = AffineBlochMap(2, 0.5 * np.eye(3), np.zeros(3))
    rec = simulate_record(plan, m, shots=10)
    # each component is (2k/shots - 1)/sqrt(2) for integer k
    k = (rec.evolved * np.sqrt(2) + 1) * 10 / 2
    np.testing.assert_allclose(k, np.round(k), atol=1e-9)


@pytest.mark.parametrize("n", [2, 3])
def test_finite_shot_estimator_converges(n, rng):
    plan = make_plan(n)
    m = random_cptp_map(n, rng, rank=n)
    true = volume_factor(m)
    errors = []
    for k in (3, 4, 5, 6):
        errs = [abs(estimate_volume(simulate_record(plan, m, 10**k, seed), plan) - true) for seed in range(20)]
        errors.append(np.mean(errs))
    assert all(b < a for a, b in zip(errors, errors[1:]))


def test_markovian_records_with_threshold_stay_zero(qubit):
    model = LorentzianDecayModel(0.1)
    times = np.linspace(0, 10, 21)
    maps = [lorentzian_map(model, t, qubit) for t in times]
    plan = make_plan(2)
    zeros = sum(
        estimate_nv_from_records(simulate_records(plan, maps, 10**6, seed * 1000), plan, 1e-3).n_v == 0
        for seed in range(100)
    )
    assert zeros >= 95


def test_noiseless_records_reproduce_model_nv(qubit):
    model = LorentzianDecayModel(10.0)
    times = np.linspace(0, 10, 1001)
    plan = make_plan(2)
    records = simulate_records(plan, [lorentzian_map(model, t, qubit) for t in times])
    direct = measure_nv(lorentzian_trajectory(model, times)).n_v
    assert estimate_nv_from_records(records, plan).n_v == pytest.approx(direct, abs=1e-9)
    markov = LorentzianDecayModel(0.1)
    records = simulate_records(plan, [lorentzian_map(markov, t, qubit) for t in times])
    assert estimate_nv_from_records(records, plan).n_v == 0


def test_record_round_trip(rng):
    plan = make_plan(3)
    rec = simulate_record(plan, random_cptp_map(3, rng, t=0.5), shots=100, seed=3)
    back = TomographyRecord.loads(rec.dumps())
    np.testing.assert_array_equal(back.evolved, rec.evolved)
    np.testing.assert_array_equal(back.mixed_image, rec.mixed_image)
    assert (back.t, back.shots, back.seed) == (0.5, 100, 3)
    # column-major storage: the first m entries are the first evolved vector
    assert rec.to_record()["evolved"][:8] == rec.evolved[:, 0].tolist()
