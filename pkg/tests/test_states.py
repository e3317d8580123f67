"""Quantum-object validation, purification, bases, samplers, serialization."""

import math

import numpy as np
import pytest

from wvlab.errors import InvalidState
from wvlab.linalg import dag, hermitian_eigenvalues, max_abs
from wvlab.states import (
    MeasurementModel,
    Observable,
    QuantumState,
    coherent_state,
    coherent_tail_mass,
    computational_basis,
    fourier_basis,
    lift_operator,
    measurement_from_json,
    measurement_to_json,
    observable_from_json,
    observable_to_json,
    partial_trace_ancilla,
    pauli,
    purify,
    random_density_operator,
    random_povm,
    random_projective_povm,
    random_pure_state,
    random_rank1_povm,
    state_from_json,
    state_to_json,
    truncated_annihilation,
)
from wvlab.uncertainty import operator_variance


def test_pure_state_norm_validation():
    QuantumState.pure([1.0, 0.0])
    with pytest.raises(InvalidState):
        QuantumState.pure([1.0, 1.0])


def test_mixed_state_validation():
    QuantumState.mixed(np.eye(2) / 2)
    with pytest.raises(InvalidState):
        QuantumState.mixed(np.array([[0.5, 0.3], [0.1, 0.5]]))  # not Hermitian
    with pytest.raises(InvalidState):
        QuantumState.mixed(np.eye(2))  # trace 2
    with pytest.raises(InvalidState):
        QuantumState.mixed(np.diag([1.001, -0.001]))  # too negative


def test_mixed_state_clamps_tolerable_negativity():
    rho = np.diag([1.0 + 5e-11, -5e-11]).astype(complex)
    state = QuantumState.mixed(rho)
    vals = hermitian_eigenvalues(state.matrix)
    assert vals[0] >= -1e-14
    assert abs(np.trace(state.matrix).real - 1.0) <= 1e-12


def test_observable_hermitian_flag():
    assert Observable(pauli("y")).hermitian
    assert not Observable(np.array([[0.0, 1.0], [0.0, 0.0]])).hermitian


def test_purify_pure_input():
    rho = QuantumState.mixed(np.diag([1.0, 0.0]).astype(complex))
    big = purify(rho)
    assert big.dim == 4
    assert max_abs(partial_trace_ancilla(big.vector, 2) - rho.matrix) <= 1e-10


def test_purify_maximally_mixed_schmidt():
    big = purify(QuantumState.mixed(np.eye(2) / 2))
    singular = np.linalg.svd(big.vector.reshape(2, 2), compute_uv=False)
    assert np.allclose(singular, [1 / math.sqrt(2)] * 2, atol=1e-12)


def test_purify_random_qutrit_seed11():
    rho = random_density_operator(3, 2, np.random.default_rng(11))
    big = purify(rho)
    assert max_abs(partial_trace_ancilla(big.vector, 3) - rho.matrix) <= 1e-10


def test_purify_round_trip_fuzz():
    rng = np.random.default_rng(2025)
    for _ in range(1000):
        d = int(rng.integers(2, 5))
        rho = random_density_operator(d, int(rng.integers(1, d + 1)), rng)
        big = purify(rho)
        assert max_abs(partial_trace_ancilla(big.vector, d) - rho.matrix) <= 1e-10


def test_purify_lifts_averages():
    rng = np.random.default_rng(4)
    rho = random_density_operator(3, 3, rng)
    a = pauli("z")
    op = np.zeros((3, 3), dtype=complex)
    op[:2, :2] = a
    big = purify(rho)
    lifted = big.expectation(lift_operator(op, 3))
    assert abs(lifted - rho.expectation(op)) <= 1e-10


def test_purify_requires_mixed_kind():
    with pytest.raises(InvalidState):
        purify(QuantumState.pure([1.0, 0.0]))


def test_fourier_basis_qubit_is_plus_minus():
    model = fourier_basis(2)
    plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    assert abs(abs(complex(plus.conj() @ model.element_vector(0))) - 1.0) <= 1e-12
    assert abs(abs(complex(np.array([1.0, 0.0]).conj() @ model.element_vector(0))) ** 2 - 0.5) <= 1e-12


def test_fourier_basis_overlaps_and_completeness():
    for d in range(2, 9):
        model = fourier_basis(d)
        total = sum(model.elements)
        assert max_abs(total - np.eye(d)) <= 1e-12
        for j in range(d):
            ej = np.zeros(d)
            ej[j] = 1.0
            for k in range(d):
                overlap = abs(complex(ej.conj() @ model.element_vector(k))) ** 2
                assert abs(overlap - 1.0 / d) <= 1e-12


def test_sampler_outputs_validate():
    rng = np.random.default_rng(77)
    for trial in range(10_000):
        d = int(rng.integers(2, 7))
        kind = trial % 3
        if kind == 0:
            psi = random_pure_state(d, rng)
            assert abs(np.linalg.norm(psi.vector) - 1.0) <= 1e-12
        elif kind == 1:
            rho = random_density_operator(d, int(rng.integers(1, d + 1)), rng)
            assert max_abs(rho.matrix - dag(rho.matrix)) <= 1e-12
            assert abs(np.trace(rho.matrix).real - 1.0) <= 1e-10
        else:
            povm = random_rank1_povm(d, rng)
            povm.validate(tol=1e-10)


def test_rank1_density_operator_is_pure():
    rho = random_density_operator(3, 1, np.random.default_rng(5))
    assert abs(rho.purity() - 1.0) <= 1e-10


def test_rank1_povm_full_validation_seed9():
    povm = random_rank1_povm(4, np.random.default_rng(9))
    povm.validate(tol=1e-10, full=True)


def test_random_povm_elements_are_valid():
    rng = np.random.default_rng(13)
    for _ in range(50):
        d = int(rng.integers(2, 6))
        povm = random_povm(d, int(rng.integers(2, d + 2)), rng)
        povm.validate(tol=1e-10, full=True)


def test_random_projective_povm_idempotent():
    rng = np.random.default_rng(17)
    for _ in range(50):
        d = int(rng.integers(2, 7))
        povm = random_projective_povm(d, rng)
        povm.validate(tol=1e-10)
        for e in povm.elements:
            assert max_abs(e @ e - e) <= 1e-10


def test_truncated_annihilation_smallest():
    a = truncated_annihilation(2).matrix
    assert np.allclose(a, [[0.0, 1.0], [0.0, 0.0]], atol=1e-15)


def test_truncated_annihilation_number_operator():
    a = truncated_annihilation(4).matrix
    assert max_abs(dag(a) @ a - np.diag([0.0, 1.0, 2.0, 3.0])) <= 1e-12


def test_bosonic_variance_gap_on_coherent_state():
    dim = 20
    assert coherent_tail_mass(dim, 1.0) < 1e-8
    a = truncated_annihilation(dim)
    state = coherent_state(dim, 1.0)
    gap = operator_variance(Observable(dag(a.matrix)), state) - operator_variance(a, state)
    assert abs(gap - 1.0) <= 1e-6


def test_json_round_trips():
    rng = np.random.default_rng(3)
    psi = random_pure_state(3, rng)
    assert max_abs(state_from_json(state_to_json(psi)).vector - psi.vector) <= 1e-15

    rho = random_density_operator(3, 2, rng)
    assert max_abs(state_from_json(state_to_json(rho)).matrix - rho.matrix) <= 1e-15

    obs = Observable(pauli("y"))
    back = observable_from_json(observable_to_json(obs))
    assert max_abs(back.matrix - obs.matrix) <= 1e-15
    assert back.hermitian

    povm = random_rank1_povm(3, rng)
    back_m = measurement_from_json(measurement_to_json(povm))
    assert back_m.kind == povm.kind
    assert back_m.labels == povm.labels
    for e1, e2 in zip(back_m.elements, povm.elements):
        assert max_abs(e1 - e2) <= 1e-15
    # vectors are not serialized; extraction recovers them up to phase
    v = back_m.element_vector(0)
    assert abs(abs(complex(v.conj() @ povm.element_vector(0))) - 1.0) <= 1e-10


def test_measurement_model_invariants():
    basis = computational_basis(3)
    basis.validate(tol=1e-12, full=True)
    with pytest.raises(InvalidState):
        MeasurementModel(elements=[np.eye(2) * 0.5], labels=["only"]).validate()
