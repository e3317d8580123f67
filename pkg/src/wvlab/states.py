"""Validated quantum states, observables and measurements, plus samplers.

States are either pure (unit vector) or mixed (density operator); both are
frozen after construction. Measurement models hold POVM elements with
outcome labels; rank-1 projective models additionally carry the basis
vectors. JSON serialization encodes complex entries as [re, im] pairs in
row-major order.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidState
from .linalg import (
    DEFAULT_ATOL,
    dag,
    hermitian_eigendecomposition,
    max_abs,
    random_ginibre,
    random_haar_unitary,
    require_square,
)

_PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def pauli(name: str) -> np.ndarray:
    """Pauli matrix by axis name ('x', 'y' or 'z')."""
    return _PAULI[name].copy()


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass
class Observable:
    """A linear operator; `hermitian` is detected at construction."""

    matrix: np.ndarray
    hermitian: bool = field(init=False)

    def __post_init__(self):
        m = require_square(self.matrix, "observable")
        self.matrix = _frozen(m)
        self.hermitian = max_abs(m - dag(m)) <= DEFAULT_ATOL

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def adjoint(self) -> "Observable":
        return Observable(dag(self.matrix))


def as_operator_matrix(operator) -> np.ndarray:
    """Accept an Observable or a raw square array."""
    if isinstance(operator, Observable):
        return operator.matrix
    return require_square(operator, "operator")


def _psd_up_to(matrix: np.ndarray, slack: float) -> bool:
    """True when all eigenvalues exceed -slack (Cholesky probe)."""
    shifted = matrix + slack * np.eye(matrix.shape[0])
    try:
        np.linalg.cholesky(shifted)
        return True
    except np.linalg.LinAlgError:
        return False


@dataclass
class QuantumState:
    """Pure state vector or mixed density operator of dimension `dim`."""

    kind: str
    dim: int
    vector: np.ndarray | None = None
    matrix: np.ndarray | None = None

    @classmethod
    def pure(cls, vector, tol: float = DEFAULT_ATOL) -> "QuantumState":
        vec = np.asarray(vector, dtype=complex).reshape(-1)
        if vec.size == 0:
            raise InvalidState("empty state vector")
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > tol:
            raise InvalidState(f"state vector norm {norm:.12f} is not 1 within {tol:.1e}")
        return cls(kind="pure", dim=vec.size, vector=_frozen(vec))

    @classmethod
    def mixed(cls, matrix, tol: float = DEFAULT_ATOL) -> "QuantumState":
        rho = require_square(matrix, "density operator")
        if max_abs(rho - dag(rho)) > tol:
            raise InvalidState("density operator is not Hermitian")
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > tol:
            raise InvalidState(f"density operator trace {tr:.12f} is not 1 within {tol:.1e}")
        rho = 0.5 * (rho + dag(rho))
        # Fast acceptance for spectra above float noise; the slow path
        # clamps tolerable negativity or rejects anything worse.
        if not _psd_up_to(rho, 1e-14):
            dec = hermitian_eigendecomposition(rho, tol=tol)
            low = float(dec.eigenvalues[0])
            if low < -tol:
                raise InvalidState(f"density operator has eigenvalue {low:.3e} below -{tol:.1e}")
            if low < 0.0:
                clamped = np.clip(dec.eigenvalues, 0.0, None)
                rho = (dec.eigenvectors * clamped) @ dag(dec.eigenvectors)
                rho = rho / np.trace(rho).real
        return cls(kind="mixed", dim=rho.shape[0], matrix=_frozen(rho))

    def density_matrix(self) -> np.ndarray:
        if self.kind == "pure":
            return np.outer(self.vector, self.vector.conj())
        return self.matrix

    def expectation(self, operator) -> complex:
        op = as_operator_matrix(operator)
        if op.shape[0] != self.dim:
            raise DimensionMismatch(f"operator dim {op.shape[0]} != state dim {self.dim}")
        if self.kind == "pure":
            return complex(self.vector.conj() @ (op @ self.vector))
        return complex(np.trace(self.matrix @ op))

    def purity(self) -> float:
        if self.kind == "pure":
            return 1.0
        return float(np.trace(self.matrix @ self.matrix).real)


def as_state(state, tol: float = DEFAULT_ATOL) -> QuantumState:
    """Accept a QuantumState, a 1-D vector (pure) or a 2-D matrix (mixed)."""
    if isinstance(state, QuantumState):
        return state
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        return QuantumState.pure(arr, tol=tol)
    if arr.ndim == 2:
        return QuantumState.mixed(arr, tol=tol)
    raise InvalidState(f"cannot interpret array of ndim {arr.ndim} as a state")


RANK1_PROJECTIVE = "rank1_projective"
PROJECTIVE = "projective"
GENERAL_POVM = "general_povm"


@dataclass
class MeasurementModel:
    """POVM with outcome labels; kind is one of rank1_projective,
    projective or general_povm."""

    elements: list
    labels: list
    kind: str = GENERAL_POVM
    vectors: list | None = None

    def __post_init__(self):
        elems = [(_frozen(require_square(e, "POVM element"))) for e in self.elements]
        if not elems:
            raise DimensionMismatch("measurement needs at least one element")
        d = elems[0].shape[0]
        if any(e.shape[0] != d for e in elems):
            raise DimensionMismatch("POVM elements have mixed dimensions")
        if len(self.labels) != len(elems):
            raise DimensionMismatch("labels and elements differ in length")
        self.elements = elems
        self.labels = [str(lbl) for lbl in self.labels]
        if self.vectors is not None:
            self.vectors = [_frozen(np.asarray(v, dtype=complex).reshape(-1)) for v in self.vectors]

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @property
    def outcome_count(self) -> int:
        return len(self.elements)

    @classmethod
    def from_basis(cls, vectors, labels=None, kind: str = RANK1_PROJECTIVE) -> "MeasurementModel":
        """Rank-1 projective model from orthonormal basis vectors.

        `vectors` is a list of kets or a unitary whose columns are the kets.
        """
        arr = np.asarray(vectors, dtype=complex)
        kets = [arr[:, k] for k in range(arr.shape[1])] if arr.ndim == 2 else list(vectors)
        if labels is None:
            labels = [f"m{k}" for k in range(len(kets))]
        elems = [np.outer(v, v.conj()) for v in kets]
        return cls(elements=elems, labels=list(labels), kind=kind, vectors=kets)

    def element_vector(self, index: int) -> np.ndarray:
        """Unit ket of a rank-1 element (up to phase)."""
        if self.vectors is not None:
            return self.vectors[index]
        e = self.elements[index]
        j = int(np.argmax(np.real(np.diagonal(e))))
        pivot = e[j, j].real
        if pivot <= 0:
            raise InvalidState("rank-1 element has no positive diagonal entry")
        return e[:, j] / math.sqrt(pivot)

    def validate(self, tol: float = DEFAULT_ATOL, full: bool = False) -> None:
        """Raise InvalidState on any violated invariant.

        The cheap checks cover hermiticity, completeness and (for
        projective kinds) idempotence; `full=True` additionally bounds
        every element spectrum inside [-tol, 1 + tol].
        """
        d = self.dim
        total = np.zeros((d, d), dtype=complex)
        for e in self.elements:
            if max_abs(e - dag(e)) > tol:
                raise InvalidState("POVM element is not Hermitian")
            total = total + e
        if max_abs(total - np.eye(d)) > tol:
            raise InvalidState(f"POVM completeness residual {max_abs(total - np.eye(d)):.3e}")
        if self.kind in (RANK1_PROJECTIVE, PROJECTIVE):
            for e in self.elements:
                if max_abs(e @ e - e) > tol:
                    raise InvalidState("projective element is not idempotent")
        if self.kind == RANK1_PROJECTIVE:
            for e in self.elements:
                if abs(np.trace(e).real - 1.0) > tol:
                    raise InvalidState("rank-1 element trace differs from 1")
        if full:
            for e in self.elements:
                from .linalg import hermitian_eigenvalues

                vals = hermitian_eigenvalues(e, tol=tol)
                if vals[0] < -tol or vals[-1] > 1.0 + tol:
                    raise InvalidState(
                        f"element spectrum [{vals[0]:.3e}, {vals[-1]:.3e}] leaves [0, 1]")


def computational_basis(dim: int) -> MeasurementModel:
    """Rank-1 projective measurement in the standard basis."""
    if dim < 1:
        raise ValueError(f"invalid dimension {dim}")
    return MeasurementModel.from_basis(np.eye(dim, dtype=complex),
                                       labels=[f"x{j}" for j in range(dim)])


def fourier_basis(dim: int) -> MeasurementModel:
    """Rank-1 projective measurement in the discrete Fourier basis.

    Basis kets have components exp(2*pi*i*j*k/d)/sqrt(d), which makes
    this basis mutually unbiased with the computational one: every
    cross overlap has squared modulus 1/d.
    """
    if dim < 2:
        raise ValueError(f"invalid dimension {dim}")
    j = np.arange(dim)
    phases = np.exp(2j * np.pi * np.outer(j, j) / dim) / math.sqrt(dim)
    return MeasurementModel.from_basis(phases, labels=[f"p{k}" for k in range(dim)])


def random_pure_state(dim: int, rng: np.random.Generator) -> QuantumState:
    """Haar-random pure state."""
    if dim < 1:
        raise ValueError(f"invalid dimension {dim}")
    v = random_ginibre(dim, 1, rng).reshape(-1)
    return QuantumState.pure(v / np.linalg.norm(v))


def random_density_operator(dim: int, rank: int, rng: np.random.Generator) -> QuantumState:
    """Random density operator of the given rank (Ginibre-induced measure)."""
    if dim < 1:
        raise ValueError(f"invalid dimension {dim}")
    if rank < 1 or rank > dim:
        raise ValueError(f"rank {rank} outside [1, {dim}]")
    g = random_ginibre(dim, rank, rng)
    rho = g @ dag(g)
    return QuantumState.mixed(rho / np.trace(rho).real)


def random_rank1_povm(dim: int, rng: np.random.Generator) -> MeasurementModel:
    """Random maximal measurement: projectors onto a Haar-random basis."""
    u = random_haar_unitary(dim, rng)
    return MeasurementModel.from_basis(u)


def random_povm(dim: int, outcomes: int, rng: np.random.Generator) -> MeasurementModel:
    """Random general POVM from the blocks of a Haar isometry.

    A (outcomes*dim) x dim isometry V is split into dim x dim blocks V_k;
    the elements V_k† V_k are positive and sum to the identity exactly.
    """
    if outcomes < 1:
        raise ValueError(f"invalid outcome count {outcomes}")
    g = random_ginibre(outcomes * dim, dim, rng)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    ph = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    iso = q * ph
    elems = []
    for k in range(outcomes):
        block = iso[k * dim:(k + 1) * dim, :]
        elems.append(dag(block) @ block)
    return MeasurementModel(elements=elems, labels=[f"e{k}" for k in range(outcomes)],
                            kind=GENERAL_POVM)


def random_projective_povm(dim: int, rng: np.random.Generator,
                           blocks: int | None = None) -> MeasurementModel:
    """Random projective measurement with ranks >= 1 (coarse-grained basis)."""
    u = random_haar_unitary(dim, rng)
    if blocks is None:
        blocks = int(rng.integers(2, dim + 1)) if dim > 1 else 1
    blocks = max(1, min(blocks, dim))
    cuts = sorted(rng.choice(np.arange(1, dim), size=blocks - 1, replace=False).tolist()) if blocks > 1 else []
    bounds = [0] + cuts + [dim]
    elems = []
    for k in range(blocks):
        cols = u[:, bounds[k]:bounds[k + 1]]
        elems.append(cols @ dag(cols))
    return MeasurementModel(elements=elems, labels=[f"P{k}" for k in range(blocks)],
                            kind=PROJECTIVE)


def purify(rho: QuantumState, tol: float = DEFAULT_ATOL) -> QuantumState:
    """Pure state on the doubled space whose ancilla trace recovers `rho`.

    Uses the spectral form: sqrt-eigenvalue Schmidt coefficients against
    computational ancilla kets, dropping eigenvalues below 1e-12.
    """
    if not isinstance(rho, QuantumState) or rho.kind != "mixed":
        raise InvalidState("purify expects a mixed-kind QuantumState")
    dec = hermitian_eigendecomposition(rho.matrix, tol=tol)
    d = rho.dim
    psi = np.zeros(d * d, dtype=complex)
    for k in range(d):
        lam = float(dec.eigenvalues[k])
        if lam < 1e-12:
            continue
        psi += math.sqrt(lam) * np.kron(dec.eigenvectors[:, k], _unit_vector(d, k))
    norm = float(np.linalg.norm(psi))
    return QuantumState.pure(psi / norm, tol=tol)


def _unit_vector(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def partial_trace_ancilla(vector: np.ndarray, dim: int) -> np.ndarray:
    """System density operator of a pure state on system (x) ancilla."""
    psi = np.asarray(vector, dtype=complex).reshape(-1)
    if psi.size != dim * dim:
        raise DimensionMismatch(f"vector size {psi.size} is not dim^2 = {dim * dim}")
    m = psi.reshape(dim, dim)
    return m @ dag(m)


def lift_operator(operator, dim: int) -> np.ndarray:
    """Embed an operator as op (x) identity on the doubled space."""
    op = as_operator_matrix(operator)
    if op.shape[0] != dim:
        raise DimensionMismatch(f"operator dim {op.shape[0]} != {dim}")
    return np.kron(op, np.eye(dim, dtype=complex))


def truncated_annihilation(dim: int) -> Observable:
    """Lowering operator on the lowest `dim` number states."""
    if dim < 2:
        raise ValueError(f"invalid dimension {dim}")
    a = np.zeros((dim, dim), dtype=complex)
    for n in range(1, dim):
        a[n - 1, n] = math.sqrt(n)
    return Observable(a)


def coherent_state(dim: int, alpha: complex) -> QuantumState:
    """Normalized truncation of the coherent expansion sum alpha^n/sqrt(n!)."""
    if dim < 1:
        raise ValueError(f"invalid dimension {dim}")
    amps = np.zeros(dim, dtype=complex)
    term = 1.0 + 0.0j
    for n in range(dim):
        amps[n] = term
        term = term * alpha / math.sqrt(n + 1)
    return QuantumState.pure(amps / np.linalg.norm(amps))


def coherent_tail_mass(dim: int, alpha: complex) -> float:
    """Probability the untruncated coherent state assigns to levels >= dim."""
    x = abs(alpha) ** 2
    head = 0.0
    term = math.exp(-x)
    for n in range(dim):
        head += term
        term = term * x / (n + 1)
    return max(0.0, 1.0 - head)


# -- JSON schema: complex entries as [re, im] pairs, row-major ---------------

def complex_to_pair(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def pair_to_complex(pair) -> complex:
    return complex(pair[0], pair[1])


def vector_to_json(vec: np.ndarray) -> list:
    return [complex_to_pair(z) for z in np.asarray(vec, dtype=complex).reshape(-1)]


def vector_from_json(data) -> np.ndarray:
    return np.array([pair_to_complex(p) for p in data], dtype=complex)


def matrix_to_json(mat: np.ndarray) -> list:
    arr = np.asarray(mat, dtype=complex)
    return [[complex_to_pair(z) for z in row] for row in arr]


def matrix_from_json(data) -> np.ndarray:
    return np.array([[pair_to_complex(p) for p in row] for row in data], dtype=complex)


def state_to_json(state: QuantumState) -> dict:
    if state.kind == "pure":
        return {"type": "state", "kind": "pure", "dim": state.dim,
                "vector": vector_to_json(state.vector)}
    return {"type": "state", "kind": "mixed", "dim": state.dim,
            "matrix": matrix_to_json(state.matrix)}


def state_from_json(data: dict) -> QuantumState:
    if data.get("kind") == "pure":
        return QuantumState.pure(vector_from_json(data["vector"]))
    return QuantumState.mixed(matrix_from_json(data["matrix"]))


def observable_to_json(obs: Observable) -> dict:
    return {"type": "observable", "dim": obs.dim, "hermitian": obs.hermitian,
            "matrix": matrix_to_json(obs.matrix)}


def observable_from_json(data: dict) -> Observable:
    return Observable(matrix_from_json(data["matrix"]))


def measurement_to_json(model: MeasurementModel) -> dict:
    return {"type": "measurement", "kind": model.kind, "dim": model.dim,
            "labels": list(model.labels),
            "elements": [matrix_to_json(e) for e in model.elements]}


def measurement_from_json(data: dict) -> MeasurementModel:
    elems = [matrix_from_json(e) for e in data["elements"]]
    return MeasurementModel(elements=elems, labels=list(data["labels"]),
                            kind=data.get("kind", GENERAL_POVM))
