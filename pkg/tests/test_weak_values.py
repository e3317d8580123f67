"""Weak values, reconstruction formulas, estimates, triple-product search."""

import math

import numpy as np
import pytest

from wvlab.errors import InvalidState
from wvlab.linalg import dag, random_ginibre, random_hermitian
from wvlab.states import (
    MeasurementModel,
    Observable,
    QuantumState,
    computational_basis,
    pauli,
    random_density_operator,
    random_pure_state,
    random_rank1_povm,
    truncated_annihilation,
)
from wvlab.weak_values import (
    EstimateAssignment,
    average_reconstruction_check,
    estimate_mse,
    estimate_operator_mse,
    optimal_estimate,
    product_representation_check,
    replay_triple_product_trial,
    triple_product_counterexample,
    weak_value,
    weak_value_table,
)

KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)
PLUS = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)


def test_weak_value_sigma_z_plus_post_zero():
    value = weak_value(pauli("z"), KET0, QuantumState.pure(PLUS))
    assert abs(value - 1.0) <= 1e-12


def test_weak_value_identity_observable():
    rng = np.random.default_rng(1)
    for _ in range(20):
        psi = random_pure_state(3, rng)
        post = random_pure_state(3, rng).vector
        value = weak_value(np.eye(3), post, psi)
        if value is not None:
            assert abs(value - 1.0) <= 1e-10


def test_weak_value_anomalous_sigma_x():
    post = np.array([1.0, 3.0], dtype=complex) / math.sqrt(10.0)
    value = weak_value(pauli("x"), post, QuantumState.pure(KET0))
    assert abs(value - 3.0) <= 1e-12  # outside the spectrum [-1, 1]


def test_weak_value_undefined_guard():
    assert weak_value(pauli("x"), KET1, QuantumState.pure(KET0)) is None
    rho = QuantumState.mixed(np.outer(KET0, KET0))
    assert weak_value(pauli("x"), np.outer(KET1, KET1), rho) is None


def test_weak_value_density_route_matches_pure():
    rng = np.random.default_rng(6)
    for _ in range(200):
        d = int(rng.integers(2, 6))
        psi = random_pure_state(d, rng)
        rho = QuantumState.mixed(np.outer(psi.vector, psi.vector.conj()))
        a = random_ginibre(d, d, rng)
        post = random_pure_state(d, rng).vector
        w_pure = weak_value(a, post, psi)
        w_mixed = weak_value(a, np.outer(post, post.conj()), rho)
        assert abs(w_pure - w_mixed) <= 1e-12


def test_table_sigma_z_plus_computational():
    table = weak_value_table(pauli("z"), computational_basis(2), QuantumState.pure(PLUS))
    assert np.allclose(table.probabilities, [0.5, 0.5], atol=1e-12)
    assert abs(table.values[0] - 1.0) <= 1e-12
    assert abs(table.values[1] + 1.0) <= 1e-12
    assert abs(table.reconstructed_average()) <= 1e-12


def test_table_eigenvector_gives_eigenvalue():
    rng = np.random.default_rng(10)
    h = random_hermitian(4, rng)
    vals, vecs = np.linalg.eigh(h)
    psi = QuantumState.pure(vecs[:, 2])
    table = weak_value_table(h, random_rank1_povm(4, rng), psi)
    for w, ok in zip(table.values, table.defined):
        if ok:
            assert abs(w - vals[2]) <= 1e-9


def test_average_reconstruction_fuzz():
    rng = np.random.default_rng(20)
    for _ in range(2000):
        d = int(rng.integers(2, 7))
        report = average_reconstruction_check(random_hermitian(d, rng),
                                              random_rank1_povm(d, rng),
                                              random_pure_state(d, rng))
        assert report.verdict != "fail"
        assert -report.slack <= 1e-9


def test_average_reconstruction_handles_mixed_states():
    rng = np.random.default_rng(21)
    rho = random_density_operator(3, 2, rng)
    report = average_reconstruction_check(random_hermitian(3, rng),
                                          random_rank1_povm(3, rng), rho)
    assert report.verdict != "fail"


def test_product_representation_identity_factor_reduces_to_average():
    rng = np.random.default_rng(30)
    d = 3
    a = random_hermitian(d, rng)
    psi = random_pure_state(d, rng)
    povm = random_rank1_povm(d, rng)
    rep = product_representation_check(a, np.eye(d), povm, psi)
    avg = average_reconstruction_check(a, povm, psi)
    assert rep.verdict != "fail"
    assert abs(complex(rep.lhs) - complex(avg.lhs)) <= 1e-10


def test_product_representation_sigma_z_squared():
    rep = product_representation_check(pauli("z"), pauli("z"),
                                       computational_basis(2), QuantumState.pure(PLUS))
    assert abs(complex(rep.lhs) - 1.0) <= 1e-12
    assert abs(complex(rep.rhs) - 1.0) <= 1e-12


def test_product_representation_ladder_operators():
    rng = np.random.default_rng(40)
    a_op = truncated_annihilation(10).matrix
    for _ in range(50):
        psi = random_pure_state(10, rng)
        povm = random_rank1_povm(10, rng)
        rep = product_representation_check(a_op, dag(a_op), povm, psi)
        assert -rep.slack <= 1e-9


def test_product_representation_nonhermitian_fuzz():
    rng = np.random.default_rng(50)
    for _ in range(2000):
        d = int(rng.integers(2, 7))
        rep = product_representation_check(random_ginibre(d, d, rng),
                                           random_ginibre(d, d, rng),
                                           random_rank1_povm(d, rng),
                                           random_pure_state(d, rng))
        assert rep.verdict != "fail"
        assert -rep.slack <= 1e-9


def test_product_representation_rejects_mixed_state():
    rng = np.random.default_rng(51)
    rho = random_density_operator(2, 2, rng)
    with pytest.raises(InvalidState):
        product_representation_check(pauli("x"), pauli("z"),
                                     computational_basis(2), rho)


def test_weak_value_linearity():
    rng = np.random.default_rng(60)
    for _ in range(500):
        d = int(rng.integers(2, 6))
        a = random_ginibre(d, d, rng)
        b = random_ginibre(d, d, rng)
        psi = random_pure_state(d, rng)
        povm = random_rank1_povm(d, rng)
        ta = weak_value_table(a, povm, psi)
        tb = weak_value_table(b, povm, psi)
        ts = weak_value_table(a + b, povm, psi)
        for wa, wb, ws, ok in zip(ta.values, tb.values, ts.values, ta.defined):
            if ok:
                assert abs(ws - wa - wb) <= 1e-10


def test_optimal_estimate_is_weak_value_and_zero_mse():
    rng = np.random.default_rng(70)
    d = 4
    op = random_ginibre(d, d, rng)
    psi = random_pure_state(d, rng)
    povm = random_rank1_povm(d, rng)
    best = optimal_estimate(op, povm, psi)
    table = weak_value_table(op, povm, psi)
    for alpha, w, ok in zip(best.estimates, table.values, table.defined):
        if ok:
            assert abs(alpha - w) <= 1e-14
    assert estimate_mse(best, op, povm, psi) == 0.0


def test_real_constrained_estimate_penalty():
    rng = np.random.default_rng(71)
    d = 4
    op = random_ginibre(d, d, rng)
    psi = random_pure_state(d, rng)
    povm = random_rank1_povm(d, rng)
    table = weak_value_table(op, povm, psi)
    assignment = EstimateAssignment(list(table.labels),
                                    [complex(w.real, 0.0) for w in table.values], 0.0)
    expected = sum(float(p) * w.imag ** 2
                   for p, w in zip(table.probabilities, table.values))
    assert abs(estimate_mse(assignment, op, povm, psi) - expected) <= 1e-10


def test_unit_offset_estimate_costs_one():
    rng = np.random.default_rng(72)
    d = 3
    op = random_hermitian(d, rng)
    psi = random_pure_state(d, rng)
    povm = random_rank1_povm(d, rng)
    best = optimal_estimate(op, povm, psi)
    shifted = EstimateAssignment(list(best.labels),
                                 [alpha + 1.0 for alpha in best.estimates], 0.0)
    assert abs(estimate_mse(shifted, op, povm, psi) - 1.0) <= 1e-10


def test_estimate_mse_matches_operator_route():
    rng = np.random.default_rng(73)
    d = 4
    op = random_ginibre(d, d, rng)
    psi = random_pure_state(d, rng)
    povm = random_rank1_povm(d, rng)
    best = optimal_estimate(op, povm, psi)
    noisy = EstimateAssignment(
        list(best.labels),
        [alpha + z for alpha, z in zip(best.estimates,
                                       random_ginibre(d, 1, rng).reshape(-1))], 0.0)
    classical = estimate_mse(noisy, op, povm, psi)
    direct = estimate_operator_mse(noisy, op, povm, psi)
    assert abs(classical - direct) <= 1e-9


def test_estimate_mse_decreases_toward_weak_value():
    rng = np.random.default_rng(74)
    d = 3
    op = random_ginibre(d, d, rng)
    psi = random_pure_state(d, rng)
    povm = random_rank1_povm(d, rng)
    best = optimal_estimate(op, povm, psi)
    offsets = random_ginibre(d, 1, rng).reshape(-1)
    previous = None
    for t in (1.0, 0.75, 0.5, 0.25, 0.05):
        assignment = EstimateAssignment(
            list(best.labels),
            [alpha + t * z for alpha, z in zip(best.estimates, offsets)], 0.0)
        eps = estimate_mse(assignment, op, povm, psi)
        if previous is not None:
            assert eps < previous
        previous = eps
    assert previous >= 0.0


def test_triple_product_commuting_family_has_no_discrepancy():
    rng = np.random.default_rng(80)
    d = 4
    diag_a = np.diag(rng.standard_normal(d)).astype(complex)
    diag_b = np.diag(rng.standard_normal(d)).astype(complex)
    diag_c = np.diag(rng.standard_normal(d)).astype(complex)
    psi = random_pure_state(d, rng)
    povm = computational_basis(d)
    lhs = 0.0 + 0.0j
    for idx in range(d):
        ket = povm.element_vector(idx)
        p = abs(complex(ket.conj() @ psi.vector)) ** 2
        if p < 1e-12:
            continue
        wa = weak_value(diag_a, ket, psi)
        wb = weak_value(diag_b, ket, psi)
        wc = weak_value(diag_c, ket, psi)
        lhs += p * np.conj(wa) * wb * wc
    rhs = complex(psi.vector.conj() @ (dag(diag_a) @ diag_b @ diag_c @ psi.vector))
    assert abs(lhs - rhs) <= 1e-12


def test_triple_product_counterexample_found_and_replayable():
    record = triple_product_counterexample(dim=2, trials=100, master_seed=7,
                                           threshold=0.01)
    assert record is not None
    assert record.discrepancy > 0.01
    replayed = replay_triple_product_trial(record.dim, record.trial_seed)
    assert replayed == record.discrepancy  # bitwise replay


def test_triple_product_unreachable_threshold():
    assert triple_product_counterexample(dim=2, trials=50, master_seed=7,
                                         threshold=1e9) is None


def test_table_csv_and_json():
    table = weak_value_table(pauli("z"), computational_basis(2), QuantumState.pure(PLUS))
    text = table.to_csv_text()
    lines = text.strip().split("\n")
    assert lines[0] == "label,re,im,probability,defined"
    assert len(lines) == 3
    payload = table.to_json_dict()
    assert payload["outcomes"][0]["defined"] is True
    assert abs(payload["outcomes"][0]["weak_value"][0] - 1.0) <= 1e-12
