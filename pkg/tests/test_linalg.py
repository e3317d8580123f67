"""Eigensolver and random-matrix primitive tests."""

import numpy as np
import pytest

from wvlab.errors import DimensionMismatch, NonHermitianInput
from wvlab.linalg import (
    dag,
    hermitian_eigendecomposition,
    hermitian_eigenvalues,
    max_abs,
    random_bounded_hermitian,
    random_ginibre,
    random_haar_unitary,
    random_hermitian,
)


def test_identity_spectrum():
    dec = hermitian_eigendecomposition(np.eye(3, dtype=complex))
    assert np.allclose(dec.eigenvalues, [1.0, 1.0, 1.0], atol=1e-14)
    assert max_abs(dag(dec.eigenvectors) @ dec.eigenvectors - np.eye(3)) <= 1e-10


def test_pauli_x_spectrum():
    sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    dec = hermitian_eigendecomposition(sx)
    assert np.allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-12)


def test_random_hermitian_seed42_reconstruction():
    h = random_hermitian(6, np.random.default_rng(42))
    dec = hermitian_eigendecomposition(h)
    assert max_abs(dec.reconstruct() - h) <= 1e-10 * max_abs(h)


def test_eigendecomposition_fuzz_against_lapack():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        d = int(rng.integers(2, 9))
        h = random_hermitian(d, rng)
        dec = hermitian_eigendecomposition(h)
        scale = max(max_abs(h), 1e-30)
        assert max_abs(dec.reconstruct() - h) <= 1e-10 * scale
        assert max_abs(dag(dec.eigenvectors) @ dec.eigenvectors - np.eye(d)) <= 1e-10
        assert np.all(np.diff(dec.eigenvalues) >= -1e-14)
        assert max_abs(dec.eigenvalues - np.linalg.eigvalsh(h)) <= 1e-10 * scale


def test_eigenvalues_only_matches_full():
    rng = np.random.default_rng(7)
    h = random_hermitian(5, rng)
    full = hermitian_eigendecomposition(h)
    assert np.allclose(hermitian_eigenvalues(h), full.eigenvalues, atol=1e-12)


def test_non_hermitian_rejected():
    with pytest.raises(NonHermitianInput):
        hermitian_eigendecomposition(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(DimensionMismatch):
        hermitian_eigendecomposition(np.zeros((2, 3)))


def test_trace_cyclicity():
    rng = np.random.default_rng(11)
    for _ in range(200):
        x = random_ginibre(4, 4, rng)
        y = random_ginibre(4, 4, rng)
        z = random_ginibre(4, 4, rng)
        t1 = np.trace(x @ y @ z)
        t2 = np.trace(z @ x @ y)
        scale = max(abs(t1), 1.0)
        assert abs(t1 - t2) <= 1e-12 * scale


def test_adjoint_antihomomorphism():
    rng = np.random.default_rng(12)
    for _ in range(200):
        x = random_ginibre(4, 4, rng)
        y = random_ginibre(4, 4, rng)
        assert max_abs(dag(x @ y) - dag(y) @ dag(x)) <= 1e-12


def test_haar_dim1_unit_modulus():
    u = random_haar_unitary(1, np.random.default_rng(3))
    assert abs(abs(u[0, 0]) - 1.0) <= 1e-12


def test_haar_unitarity_seed7():
    u = random_haar_unitary(4, np.random.default_rng(7))
    assert max_abs(dag(u) @ u - np.eye(4)) <= 1e-10


def test_haar_first_entry_moment():
    # E|U_00|^2 = 1/d for Haar; Monte Carlo check at d = 2.
    rng = np.random.default_rng(99)
    total = 0.0
    n = 10_000
    for _ in range(n):
        u = random_haar_unitary(2, rng)
        total += abs(u[0, 0]) ** 2
    assert abs(total / n - 0.5) <= 0.02


def test_haar_left_invariance_aggregate():
    # Left-multiplying by a fixed unitary must not shift entry moments.
    rng = np.random.default_rng(123)
    fixed = random_haar_unitary(3, np.random.default_rng(1))
    plain, rotated = 0.0, 0.0
    n = 4000
    for _ in range(n):
        u = random_haar_unitary(3, rng)
        plain += abs(u[0, 0]) ** 2
        rotated += abs((fixed @ u)[0, 0]) ** 2
    assert abs(plain / n - 1.0 / 3.0) <= 0.03
    assert abs(rotated / n - 1.0 / 3.0) <= 0.03


def test_ginibre_deterministic_under_seed():
    a = random_ginibre(1, 1, np.random.default_rng(5))
    b = random_ginibre(1, 1, np.random.default_rng(5))
    assert a[0, 0] == b[0, 0]


def test_ginibre_gram_psd():
    g = random_ginibre(3, 3, np.random.default_rng(8))
    gram = g @ dag(g)
    vals = hermitian_eigenvalues(gram)
    assert vals[0] >= -1e-12


def test_ginibre_unit_variance():
    g = random_ginibre(400, 250, np.random.default_rng(21))
    assert abs(float(np.mean(np.abs(g) ** 2)) - 1.0) <= 0.02


def test_bounded_hermitian_unit_radius():
    rng = np.random.default_rng(31)
    for d in (2, 4, 6):
        h = random_bounded_hermitian(d, rng)
        vals = hermitian_eigenvalues(h)
        assert abs(float(np.max(np.abs(vals))) - 1.0) <= 1e-10


def test_invalid_dimensions_raise():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        random_haar_unitary(0, rng)
    with pytest.raises(ValueError):
        random_ginibre(0, 3, rng)
