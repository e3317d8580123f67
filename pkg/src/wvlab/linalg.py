"""Dense complex linear algebra for small dimensions (d <= ~64).

Provides a cyclic-Jacobi Hermitian eigensolver and the random-matrix
primitives (Ginibre, Haar unitary) used by the samplers and fuzz suites.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NonHermitianInput

DEFAULT_ATOL = 1e-10

_MAX_SWEEPS = 100


def dag(matrix: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return matrix.conj().T


def max_abs(matrix: np.ndarray) -> float:
    """Largest entry modulus; 0.0 for an empty array."""
    arr = np.asarray(matrix)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def require_square(matrix: np.ndarray, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {arr.shape}")
    return arr


@dataclass
class EigenDecomposition:
    """Spectral decomposition A = V diag(w) V† with w ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dag(v)


def hermitian_eigendecomposition(matrix: np.ndarray, tol: float = DEFAULT_ATOL,
                                 compute_vectors: bool = True) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix with cyclic Jacobi rotations.

    Parameters
    ----------
    matrix : square array, Hermitian to within `tol` in max-entry norm.
    tol : Hermiticity tolerance for the input check.
    compute_vectors : skip eigenvector accumulation when False (the
        returned `eigenvectors` is then the identity-sized accumulator
        and should be ignored).

    Raises
    ------
    NonHermitianInput : if max|A - A†| exceeds `tol`.
    NoConvergence : if the off-diagonal mass does not vanish within the
        sweep cap (does not occur for well-formed inputs at d <= 64).
    """
    a = require_square(matrix)
    n = a.shape[0]
    if n == 0:
        raise DimensionMismatch("empty matrix")
    if max_abs(a - dag(a)) > tol:
        raise NonHermitianInput(f"max|A - A†| = {max_abs(a - dag(a)):.3e} exceeds tol {tol:.3e}")

    h = 0.5 * (a + dag(a))
    v = np.eye(n, dtype=complex)
    if n == 1:
        return EigenDecomposition(np.array([h[0, 0].real]), v)

    scale = max(max_abs(h), np.finfo(float).tiny)
    stop = 5e-15 * scale
    skip = 1e-16 * scale

    converged = False
    for _ in range(_MAX_SWEEPS):
        off = np.abs(h - np.diag(np.diagonal(h)))
        if off.max() <= stop:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                beta = h[p, q]
                ab = abs(beta)
                if ab <= skip:
                    continue
                phase = beta / ab
                tau = (h[q, q].real - h[p, p].real) / (2.0 * ab)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c

                hp = h[:, p].copy()
                hq = h[:, q].copy()
                h[:, p] = c * hp - s * np.conj(phase) * hq
                h[:, q] = s * phase * hp + c * hq
                hp = h[p, :].copy()
                hq = h[q, :].copy()
                h[p, :] = c * hp - s * phase * hq
                h[q, :] = s * np.conj(phase) * hp + c * hq
                h[p, q] = 0.0
                h[q, p] = 0.0
                h[p, p] = h[p, p].real
                h[q, q] = h[q, q].real

                if compute_vectors:
                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = c * vp - s * np.conj(phase) * vq
                    v[:, q] = s * phase * vp + c * vq
    if not converged:
        raise NoConvergence(f"Jacobi sweeps exceeded {_MAX_SWEEPS} at dimension {n}")

    values = np.real(np.diagonal(h)).copy()
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(values[order], np.ascontiguousarray(v[:, order]))


def hermitian_eigenvalues(matrix: np.ndarray, tol: float = DEFAULT_ATOL) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (no eigenvectors)."""
    return hermitian_eigendecomposition(matrix, tol=tol, compute_vectors=False).eigenvalues


def random_ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Matrix of i.i.d. standard complex normal entries (E|z|^2 = 1)."""
    if rows < 1 or cols < 1:
        raise ValueError(f"invalid Ginibre shape ({rows}, {cols})")
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / math.sqrt(2.0)


def random_haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix.

    The diagonal of R is rephased to unit modulus, which makes the QR
    factorization unique and the resulting Q exactly Haar.
    """
    if dim < 1:
        raise ValueError(f"invalid dimension {dim}")
    g = random_ginibre(dim, dim, rng)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    ph = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    return q * ph


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian part of a Ginibre matrix (Gaussian unitary ensemble)."""
    g = random_ginibre(dim, dim, rng)
    return 0.5 * (g + dag(g))


def random_bounded_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random Hermitian matrix rescaled to unit spectral radius."""
    h = random_hermitian(dim, rng)
    radius = float(np.max(np.abs(hermitian_eigenvalues(h))))
    if radius < 1e-14:
        return h
    return h / radius
