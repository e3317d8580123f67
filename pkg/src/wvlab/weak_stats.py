"""Weak joint probabilities, purity, incompatibility and their tradeoffs.

The weak joint probability of two POVM elements is the symmetrized real
cross moment p_w(a,b) = Re tr(rho A_a B_b): it marginalizes like a
classical joint distribution but may go negative. The incompatibility
cell I(a,b) = (Im tr(rho A_a B_b))^2 captures the missing imaginary
part, and the exact split

    p_w(a,b)^2 + I(a,b) = |tr(rho A_a B_b)|^2

is the keystone from which every tradeoff here follows by Schwarz-type
bounds on the right hand side.
"""

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDecomposition,
    DimensionMismatch,
    NotProjective,
    UndefinedPostselection,
)
from .linalg import max_abs
from .reports import (
    RelationReport,
    FAIL,
    PASS,
    identity_report,
    inequality_report,
    skipped_report,
)
from .states import (
    MeasurementModel,
    RANK1_PROJECTIVE,
    as_state,
    computational_basis,
    fourier_basis,
)
from .weak_values import DENOMINATOR_GUARD

ANOMALY_TOL = 1e-12


def _unit_ket(vec, dim=None) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-10:
        raise DimensionMismatch(f"postselection ket norm {norm:.12f} is not 1")
    if dim is not None and v.size != dim:
        raise DimensionMismatch("ket dimension mismatch")
    return v


@dataclass
class ProjectorWeakValuePair:
    """Weak values of two rank-1 projectors in interchanged roles.

    `a_given_b` weakly measures |a><a| postselecting on b, and
    `b_given_a` the converse. For pure states the filter residuals
    record how well each weak value maps the wavefunction between the
    two bases; they are None for mixed states.
    """

    a_given_b: complex
    b_given_a: complex
    filter_residuals: tuple | None

    def product(self) -> complex:
        return self.a_given_b * self.b_given_a


def projector_weak_value_pair(a_vec, b_vec, state,
                              guard: float = DENOMINATOR_GUARD) -> ProjectorWeakValuePair:
    """Both weak values of the interchanged projector scenarios."""
    st = as_state(state)
    a = _unit_ket(a_vec, st.dim)
    b = _unit_ket(b_vec, st.dim)
    ab = complex(a.conj() @ b)

    if st.kind == "pure":
        psi_a = complex(a.conj() @ st.vector)
        psi_b = complex(b.conj() @ st.vector)
        if abs(psi_b) ** 2 < guard or abs(psi_a) ** 2 < guard:
            raise UndefinedPostselection("postselection amplitude below guard")
        w_ab = np.conj(ab) * psi_a / psi_b
        w_ba = ab * psi_b / psi_a
        residuals = (abs(w_ab * psi_b - np.conj(ab) * psi_a),
                     abs(w_ba * psi_a - ab * psi_b))
        return ProjectorWeakValuePair(w_ab, w_ba, residuals)

    rho = st.matrix
    rho_aa = complex(a.conj() @ (rho @ a)).real
    rho_bb = complex(b.conj() @ (rho @ b)).real
    if rho_bb < guard or rho_aa < guard:
        raise UndefinedPostselection("postselection probability below guard")
    rho_ab = complex(a.conj() @ (rho @ b))
    w_ab = np.conj(ab) * rho_ab / rho_bb
    w_ba = ab * np.conj(rho_ab) / rho_aa
    return ProjectorWeakValuePair(w_ab, w_ba, None)


@dataclass
class AnomalousDecomposition:
    """Split of a projector weak value into mean and anomalous parts.

    weak value = projector_mean + uncertainty * anomalous_ratio, where
    `orthogonal_state` is the normalized component of P|psi> orthogonal
    to |psi> and anomalous_ratio = <b|orth>/<b|psi>.
    """

    projector_mean: float
    uncertainty: float
    anomalous_ratio: complex
    orthogonal_state: np.ndarray

    def reassembled(self) -> complex:
        return self.projector_mean + self.uncertainty * self.anomalous_ratio


def anomalous_decomposition(a_vec, b_vec, state,
                            guard: float = DENOMINATOR_GUARD) -> AnomalousDecomposition:
    """Mean plus anomalous split of the |a><a| weak value (pure states)."""
    st = as_state(state)
    if st.kind != "pure":
        raise DimensionMismatch("the anomalous split is defined for pure states")
    a = _unit_ket(a_vec, st.dim)
    b = _unit_ket(b_vec, st.dim)
    psi = st.vector
    psi_b = complex(b.conj() @ psi)
    if abs(psi_b) ** 2 < guard:
        raise UndefinedPostselection("postselection amplitude below guard")

    psi_a = complex(a.conj() @ psi)
    mean = abs(psi_a) ** 2
    spread = math.sqrt(max(mean - mean ** 2, 0.0))
    if spread <= 1e-12:
        raise DegenerateDecomposition(
            "state is an eigenvector of the projector; weak value equals its eigenvalue")
    residual_vec = psi_a * a - mean * psi
    orth = residual_vec / np.linalg.norm(residual_vec)
    ratio = complex(b.conj() @ orth) / psi_b
    return AnomalousDecomposition(projector_mean=mean, uncertainty=spread,
                                  anomalous_ratio=ratio, orthogonal_state=orth)


def complementarity_product(a_vec, b_vec, state,
                            guard: float = DENOMINATOR_GUARD,
                            tol: float = 1e-10,
                            seed: int = 0) -> RelationReport:
    """Product of the interchanged projector weak values.

    For pure states the product equals |<a|b>|^2 exactly, independent
    of the state; for mixed states it is real, nonnegative, and bounded
    above by |<a|b>|^2.
    """
    st = as_state(state)
    a = _unit_ket(a_vec, st.dim)
    b = _unit_ket(b_vec, st.dim)
    pair = projector_weak_value_pair(a, b, st, guard=guard)
    product = pair.product()
    bound = abs(complex(a.conj() @ b)) ** 2
    if abs(product.imag) > tol:
        report = inequality_report("complementarity-product", product.real, bound,
                                   tol=tol, seed=seed,
                                   notes=f"imaginary part {product.imag:.3e}")
        report.verdict = FAIL
        return report
    if st.kind == "pure":
        return identity_report("complementarity-product", product.real, bound,
                               tol=tol, seed=seed)
    slack = float(min(product.real, bound - product.real))
    verdict = FAIL if slack < -tol else PASS
    return RelationReport("complementarity-product", product.real, bound,
                          slack, verdict, seed, "mixed-state bound")


def fourier_pair_product(dim: int, j: int, k: int, state,
                         guard: float = DENOMINATOR_GUARD) -> complex:
    """Weak-value product for the computational/Fourier basis pair.

    The two bases are mutually unbiased, so for pure states the product
    equals 1/dim for every defined (j, k); mixed states stay below it.
    """
    if not (0 <= j < dim and 0 <= k < dim):
        raise DimensionMismatch(f"indices ({j}, {k}) outside dimension {dim}")
    comp = computational_basis(dim)
    four = fourier_basis(dim)
    pair = projector_weak_value_pair(comp.element_vector(j),
                                     four.element_vector(k), state, guard=guard)
    return pair.product()


def _cross_moments(a_model: MeasurementModel, b_model: MeasurementModel,
                   state) -> np.ndarray:
    """Grid z[a, b] = tr(rho A_a B_b)."""
    if a_model.dim != b_model.dim:
        raise DimensionMismatch("measurement dimensions differ")
    st = as_state(state)
    if st.dim != a_model.dim:
        raise DimensionMismatch("state and measurement dimensions differ")
    rho = st.density_matrix()
    a_stack = np.stack(a_model.elements)
    b_stack = np.stack(b_model.elements)
    return np.einsum("ij,ajk,bki->ab", rho, a_stack, b_stack)


@dataclass
class WeakJointDistribution:
    """Margenau-Hill style weak joint probabilities of two POVMs."""

    a_labels: list
    b_labels: list
    grid: np.ndarray
    marginal_a: np.ndarray
    marginal_b: np.ndarray
    weak_purity: float
    anomaly_l1: float

    def is_anomalous(self, tol: float = ANOMALY_TOL) -> bool:
        return bool(self.grid.min() < -tol)

    def conditional_given_b(self, guard: float = DENOMINATOR_GUARD) -> np.ndarray:
        """p_w(a|b) grid with NaN where the conditioning mass is below guard."""
        out = np.full(self.grid.shape, np.nan)
        for col, pb in enumerate(self.marginal_b):
            if pb >= guard:
                out[:, col] = self.grid[:, col] / pb
        return out

    def conditional_given_a(self, guard: float = DENOMINATOR_GUARD) -> np.ndarray:
        out = np.full(self.grid.shape, np.nan)
        for row, pa in enumerate(self.marginal_a):
            if pa >= guard:
                out[row, :] = self.grid[row, :] / pa
        return out

    def to_json_dict(self) -> dict:
        return {
            "a_labels": list(self.a_labels),
            "b_labels": list(self.b_labels),
            "grid": [[float(x) for x in row] for row in self.grid],
            "marginal_a": [float(x) for x in self.marginal_a],
            "marginal_b": [float(x) for x in self.marginal_b],
            "weak_purity": self.weak_purity,
            "anomaly_l1": self.anomaly_l1,
        }


def weak_joint_distribution(a_model: MeasurementModel, b_model: MeasurementModel,
                            state, guard: float = DENOMINATOR_GUARD) -> WeakJointDistribution:
    """Weak joint probabilities from the symmetrized operator form.

    The grid is computed directly as Re tr(rho A_a B_b), which stays
    well defined even for outcomes of vanishing probability; the
    conditionals derived from it honor `guard`.
    """
    z = _cross_moments(a_model, b_model, state)
    grid = np.real(z)
    rho = as_state(state).density_matrix()
    a_stack = np.stack(a_model.elements)
    b_stack = np.stack(b_model.elements)
    return WeakJointDistribution(
        a_labels=list(a_model.labels),
        b_labels=list(b_model.labels),
        grid=grid,
        marginal_a=np.real(np.einsum("ij,aji->a", rho, a_stack)),
        marginal_b=np.real(np.einsum("ij,bji->b", rho, b_stack)),
        weak_purity=float(np.sum(grid ** 2)),
        anomaly_l1=float(np.sum(np.abs(grid))),
    )


@dataclass
class IncompatibilityProfile:
    """Per-cell and total commutator-based incompatibility."""

    a_labels: list
    b_labels: list
    grid: np.ndarray
    total: float
    quantum_purity: float


def incompatibility_profile(a_model: MeasurementModel, b_model: MeasurementModel,
                            state) -> IncompatibilityProfile:
    """I(a,b) = |<[A_a, B_b]>|^2 / 4 and its total over the grid."""
    z = _cross_moments(a_model, b_model, state)
    grid = np.imag(z) ** 2
    return IncompatibilityProfile(
        a_labels=list(a_model.labels),
        b_labels=list(b_model.labels),
        grid=grid,
        total=float(np.sum(grid)),
        quantum_purity=as_state(state).purity(),
    )


def cross_moment_identity_check(a_element, b_element, state,
                                tol: float = 1e-10, seed: int = 0) -> RelationReport:
    """p_w^2 + I recombines exactly to |tr(rho A_a B_b)|^2.

    The left side is assembled from the symmetrized (anticommutator)
    and commutator averages, so the two sides follow independent
    arithmetic paths.
    """
    a = np.asarray(a_element, dtype=complex)
    b = np.asarray(b_element, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatch("element shapes differ")
    rho = as_state(state).density_matrix()
    z_ab = complex(np.trace(rho @ a @ b))
    z_ba = complex(np.trace(rho @ b @ a))
    p_w = 0.5 * (z_ab + z_ba).real
    incompat = 0.25 * abs(z_ab - z_ba) ** 2
    return identity_report("cross-moment-identity", p_w ** 2 + incompat,
                           abs(z_ab) ** 2, tol=tol, seed=seed)


def tradeoff_suite(a_model: MeasurementModel, b_model: MeasurementModel, state,
                   tol: float = 1e-9, guard: float = DENOMINATOR_GUARD,
                   seed: int = 0) -> list[RelationReport]:
    """All purity/incompatibility tradeoffs for one (A, B, state) instance.

    Worst-cell slacks are reported for the per-cell bounds. The
    pure-state maximal-measurement branch (per-cell product equality,
    conditional-product overlap bound, and the max-overlap tradeoff) is
    skipped with a note when its hypotheses do not hold.
    """
    st = as_state(state)
    z = _cross_moments(a_model, b_model, st)
    grid = np.real(z)
    incompat = np.imag(z) ** 2
    cell_mass = grid ** 2 + incompat
    p_a = grid.sum(axis=1)
    p_b = grid.sum(axis=0)
    purity_q = st.purity()
    purity_w = float(np.sum(grid ** 2))
    total_i = float(np.sum(incompat))

    a_stack = np.stack(a_model.elements)
    b_stack = np.stack(b_model.elements)
    pair_traces = np.real(np.einsum("aij,bji->ab", a_stack, b_stack))

    cond_ab = np.full(grid.shape, np.nan)
    cond_ba = np.full(grid.shape, np.nan)
    for col, pb in enumerate(p_b):
        if pb >= guard:
            cond_ab[:, col] = grid[:, col] / pb
    for row, pa in enumerate(p_a):
        if pa >= guard:
            cond_ba[row, :] = grid[row, :] / pa
    cond_product = cond_ab * cond_ba
    defined_mask = ~np.isnan(cond_product)
    skipped_cells = int((~defined_mask).sum())
    cond_note = f"skipped cells: {skipped_cells}" if skipped_cells else ""

    reports = []
    rank1_pair = (a_model.kind == RANK1_PROJECTIVE and b_model.kind == RANK1_PROJECTIVE)

    if st.kind == "pure" and rank1_pair:
        rhs34 = pair_traces * np.outer(p_a, p_b)
        residual = float(np.max(np.abs(cell_mass - rhs34)))
        reports.append(identity_report("cell-product-equality", residual, 0.0,
                                       tol=1e-10, seed=seed))

        if defined_mask.any():
            worst = int(np.nanargmax(cond_product - pair_traces))
            reports.append(inequality_report("conditional-product-overlap-bound",
                                             float(cond_product.reshape(-1)[worst]),
                                             float(pair_traces.reshape(-1)[worst]),
                                             tol=tol, seed=seed, notes=cond_note))
        else:
            reports.append(skipped_report("conditional-product-overlap-bound",
                                          seed=seed, notes="no defined conditionals"))

        c_ab = float(np.max(pair_traces))
        reports.append(inequality_report("purity-overlap-tradeoff",
                                         purity_w + total_i, c_ab, tol=tol, seed=seed))
        reports.append(inequality_report("max-overlap-bound", c_ab, 1.0, tol=tol, seed=seed))
    else:
        note = "needs a pure state and maximal measurements"
        reports.append(skipped_report("cell-product-equality", seed=seed, notes=note))
        reports.append(skipped_report("conditional-product-overlap-bound", seed=seed, notes=note))
        reports.append(skipped_report("purity-overlap-tradeoff", seed=seed, notes=note))

    reports.append(_worst_cell_bound("cell-purity-trace-bound", cell_mass,
                                     purity_q * pair_traces, tol, seed))
    reports.append(inequality_report("purity-incompatibility-tradeoff",
                                     purity_w + total_i, purity_q, tol=tol, seed=seed))
    reports.append(inequality_report("weak-purity-bound", purity_w, purity_q,
                                     tol=tol, seed=seed))
    reports.append(_worst_cell_bound("cell-probability-bound", cell_mass,
                                     np.outer(p_a, p_b), tol, seed))

    if defined_mask.any():
        reports.append(inequality_report("conditional-product-unit-bound",
                                         float(np.nanmax(cond_product)), 1.0,
                                         tol=tol, seed=seed, notes=cond_note))
    else:
        reports.append(skipped_report("conditional-product-unit-bound", seed=seed,
                                      notes="no defined conditionals"))
    return reports


def _worst_cell_bound(relation_id: str, lhs_grid: np.ndarray, rhs_grid: np.ndarray,
                      tol: float, seed: int) -> RelationReport:
    gap = rhs_grid - lhs_grid
    worst = int(np.argmin(gap))
    return inequality_report(relation_id, float(lhs_grid.reshape(-1)[worst]),
                             float(rhs_grid.reshape(-1)[worst]), tol=tol, seed=seed)


@dataclass
class StrongSequentialResult:
    """Sequential strong-measurement joint distribution plus its bounds."""

    a_labels: list
    b_labels: list
    grid: np.ndarray
    reports: list


def strong_sequential_distribution(a_model: MeasurementModel, b_model: MeasurementModel,
                                   state, tol: float = 1e-9,
                                   seed: int = 0) -> StrongSequentialResult:
    """p_s(a,b) = tr(A_a rho A_a B_b) for projective measurements.

    Verifies normalization and range of the grid and the bounds tying
    weak probabilities and incompatibility to the strong statistics:
    p_w^2 + I <= p_s, |p_w| <= sqrt(p_s), and I <= p_s.
    """
    for name, model in (("A", a_model), ("B", b_model)):
        if model.kind not in (RANK1_PROJECTIVE, "projective"):
            raise NotProjective(f"measurement {name} is kind {model.kind}")
        for e in model.elements:
            if max_abs(e @ e - e) > 1e-10:
                raise NotProjective(f"measurement {name} has a non-idempotent element")

    st = as_state(state)
    z = _cross_moments(a_model, b_model, st)
    grid_w = np.real(z)
    incompat = np.imag(z) ** 2

    rho = st.density_matrix()
    a_stack = np.stack(a_model.elements)
    b_stack = np.stack(b_model.elements)
    grid_s = np.real(np.einsum("aij,jk,akl,bli->ab", a_stack, rho, a_stack,
                               b_stack))

    reports = [
        identity_report("sequential-normalization", float(grid_s.sum()), 1.0,
                        tol=1e-10, seed=seed),
        inequality_report("sequential-range", float(grid_s.max()), 1.0, tol=tol, seed=seed),
        inequality_report("sequential-nonnegative", 0.0, float(grid_s.min()),
                          tol=tol, seed=seed),
        _worst_cell_bound("weak-vs-strong-bound", grid_w ** 2 + incompat, grid_s,
                          tol, seed),
        _worst_cell_bound("weak-modulus-bound", np.abs(grid_w), np.sqrt(np.clip(grid_s, 0.0, None)),
                          tol, seed),
        _worst_cell_bound("incompatibility-vs-strong-bound", incompat, grid_s, tol, seed),
    ]
    return StrongSequentialResult(list(a_model.labels), list(b_model.labels),
                                  grid_s, reports)


def write_grid_csv(path, a_labels, b_labels, joint: np.ndarray,
                   incompatibility: np.ndarray | None = None,
                   strong: np.ndarray | None = None) -> None:
    """Delimited dump of the (a, b) grids: p_w plus optional I and p_s."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(grid_csv_text(a_labels, b_labels, joint, incompatibility, strong))


def grid_csv_text(a_labels, b_labels, joint: np.ndarray,
                  incompatibility: np.ndarray | None = None,
                  strong: np.ndarray | None = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["a_label", "b_label", "p_w", "I", "p_s"])
    for i, a_lbl in enumerate(a_labels):
        for j, b_lbl in enumerate(b_labels):
            row = [a_lbl, b_lbl, format(float(joint[i, j]), ".17g")]
            row.append(format(float(incompatibility[i, j]), ".17g")
                       if incompatibility is not None else "")
            row.append(format(float(strong[i, j]), ".17g") if strong is not None else "")
            writer.writerow(row)
    return buf.getvalue()
