"""Weak values, the average/product reconstruction formulas, optimal
complex estimates, and the triple-product counterexample search.

The weak value of an operator A for preselected state psi, postselected
on outcome m of a maximal measurement, is <m|A|psi>/<m|psi>. For a
density operator the analogue is tr(rho M_m A)/tr(rho M_m). Outcomes
whose denominator falls below a guard threshold are Undefined (None).
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidState, UndefinedOutcome
from .linalg import dag
from .reports import (
    RelationReport,
    identity_report,
    inconclusive_report,
)
from .states import (
    MeasurementModel,
    Observable,
    QuantumState,
    as_operator_matrix,
    as_state,
    complex_to_pair,
    measurement_to_json,
    observable_to_json,
    random_pure_state,
    random_rank1_povm,
    state_to_json,
)
from .linalg import random_bounded_hermitian

DENOMINATOR_GUARD = 1e-12

#: Total probability mass that must remain defined for reconstruction
#: checks to be conclusive.
MIN_DEFINED_MASS = 1.0 - 1e-9


def weak_value(observable, post, state, guard: float = DENOMINATOR_GUARD):
    """Weak value of `observable` between `state` and one postselection.

    `post` is either a unit ket or a POVM element. Returns a complex
    number, or None when the postselection probability (pure states)
    or tr(rho M) (mixed states) falls below `guard`.
    """
    op = as_operator_matrix(observable)
    st = as_state(state)
    if op.shape[0] != st.dim:
        raise DimensionMismatch(f"observable dim {op.shape[0]} != state dim {st.dim}")

    post_arr = np.asarray(post, dtype=complex)
    if post_arr.ndim == 1:
        if post_arr.size != st.dim:
            raise DimensionMismatch("postselection vector dimension mismatch")
        if st.kind == "pure":
            amp = complex(post_arr.conj() @ st.vector)
            if abs(amp) ** 2 < guard:
                return None
            return complex(post_arr.conj() @ (op @ st.vector)) / amp
        # density route with a rank-1 postselection ket
        rho = st.matrix
        denom = complex(post_arr.conj() @ (rho @ post_arr)).real
        if denom < guard:
            return None
        num = complex(post_arr.conj() @ (op @ (rho @ post_arr)))
        return num / denom
    elem = as_operator_matrix(post_arr)
    if elem.shape[0] != st.dim:
        raise DimensionMismatch("postselection element dimension mismatch")
    rho = st.density_matrix()
    denom = complex(np.trace(rho @ elem)).real
    if denom < guard:
        return None
    num = complex(np.trace(rho @ elem @ op))
    return num / denom


@dataclass
class WeakValueTable:
    """Per-outcome weak values and probabilities for one (A, M, state)."""

    observable_id: str
    measurement_id: str
    labels: list
    values: list
    probabilities: np.ndarray
    defined: list

    def reconstructed_average(self) -> complex:
        """Probability-weighted sum of the defined weak values."""
        total = 0.0 + 0.0j
        for p, w, ok in zip(self.probabilities, self.values, self.defined):
            if ok:
                total += p * w
        return total

    def defined_mass(self) -> float:
        return float(sum(p for p, ok in zip(self.probabilities, self.defined) if ok))

    def to_json_dict(self) -> dict:
        return {
            "observable_id": self.observable_id,
            "measurement_id": self.measurement_id,
            "outcomes": [
                {
                    "label": lbl,
                    "weak_value": complex_to_pair(w) if ok else None,
                    "probability": float(p),
                    "defined": bool(ok),
                }
                for lbl, w, p, ok in zip(self.labels, self.values,
                                         self.probabilities, self.defined)
            ],
        }

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["label", "re", "im", "probability", "defined"])
        for lbl, w, p, ok in zip(self.labels, self.values,
                                 self.probabilities, self.defined):
            re = format(w.real, ".17g") if ok else ""
            im = format(w.imag, ".17g") if ok else ""
            writer.writerow([lbl, re, im, format(float(p), ".17g"),
                             "true" if ok else "false"])
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv_text())


def weak_value_table(observable, measurement: MeasurementModel, state,
                     guard: float = DENOMINATOR_GUARD,
                     observable_id: str = "A",
                     measurement_id: str = "M") -> WeakValueTable:
    """Weak values of `observable` over every outcome of `measurement`."""
    op = as_operator_matrix(observable)
    st = as_state(state)
    if op.shape[0] != st.dim or measurement.dim != st.dim:
        raise DimensionMismatch("observable, measurement and state dimensions differ")

    labels, values, probs, defined = [], [], [], []
    for idx in range(measurement.outcome_count):
        labels.append(measurement.labels[idx])
        if measurement.kind == "rank1_projective":
            ket = measurement.element_vector(idx)
            if st.kind == "pure":
                amp = complex(ket.conj() @ st.vector)
                p = abs(amp) ** 2
                ok = p >= guard
                w = complex(ket.conj() @ (op @ st.vector)) / amp if ok else None
            else:
                rho = st.matrix
                p = complex(ket.conj() @ (rho @ ket)).real
                ok = p >= guard
                w = complex(ket.conj() @ (op @ (rho @ ket))) / p if ok else None
        else:
            elem = measurement.elements[idx]
            rho = st.density_matrix()
            p = complex(np.trace(rho @ elem)).real
            ok = p >= guard
            w = complex(np.trace(rho @ elem @ op)) / p if ok else None
        values.append(w)
        probs.append(max(p, 0.0))
        defined.append(bool(ok))
    return WeakValueTable(observable_id, measurement_id, labels, values,
                          np.asarray(probs, dtype=float), defined)


def average_reconstruction_check(observable, measurement: MeasurementModel, state,
                                 tol: float = 1e-9,
                                 guard: float = DENOMINATOR_GUARD,
                                 seed: int = 0) -> RelationReport:
    """Probability-weighted weak values reproduce the direct average."""
    st = as_state(state)
    table = weak_value_table(observable, measurement, st, guard=guard)
    rhs = st.expectation(observable)
    if table.defined_mass() < MIN_DEFINED_MASS:
        return inconclusive_report("average-reconstruction", table.reconstructed_average(),
                                   rhs, seed=seed,
                                   notes=f"defined mass {table.defined_mass():.12f}")
    return identity_report("average-reconstruction", table.reconstructed_average(),
                           rhs, tol=tol, seed=seed)


def product_representation_check(observable_a, observable_b,
                                 measurement: MeasurementModel, state,
                                 tol: float = 1e-9,
                                 guard: float = DENOMINATOR_GUARD,
                                 seed: int = 0) -> RelationReport:
    """Weak-value cross products reproduce the operator product average.

    Checks sum_m p(m) conj(A_w(m)) B_w(m) against <A† B> for a pure
    state and a maximal measurement. Operators may be non-Hermitian.
    """
    st = as_state(state)
    if st.kind != "pure":
        raise InvalidState("product representation is implemented for pure states only")
    if measurement.kind != "rank1_projective":
        raise DimensionMismatch("product representation needs a maximal (rank-1) measurement")
    a = as_operator_matrix(observable_a)
    b = as_operator_matrix(observable_b)
    table_a = weak_value_table(a, measurement, st, guard=guard)
    table_b = weak_value_table(b, measurement, st, guard=guard)

    lhs = 0.0 + 0.0j
    for p, wa, wb, ok_a, ok_b in zip(table_a.probabilities, table_a.values,
                                     table_b.values, table_a.defined, table_b.defined):
        if ok_a != ok_b:
            raise UndefinedOutcome("weak-value tables disagree on defined outcomes")
        if ok_a:
            lhs += p * np.conj(wa) * wb
    rhs = complex(st.vector.conj() @ (dag(a) @ b @ st.vector))
    if table_a.defined_mass() < MIN_DEFINED_MASS:
        return inconclusive_report("product-representation", lhs, rhs, seed=seed,
                                   notes=f"defined mass {table_a.defined_mass():.12f}")
    return identity_report("product-representation", lhs, rhs, tol=tol, seed=seed)


@dataclass
class EstimateAssignment:
    """Complex per-outcome estimates with their mean square deviation."""

    labels: list
    estimates: list
    mean_square_deviation: float


def optimal_estimate(observable, measurement: MeasurementModel, state,
                     guard: float = DENOMINATOR_GUARD) -> EstimateAssignment:
    """Best complex estimate of `observable` from each outcome.

    The optimum assigns every defined outcome its weak value, at which
    the mean square deviation vanishes.
    """
    table = weak_value_table(observable, measurement, state, guard=guard)
    estimates = [w if ok else 0.0 + 0.0j
                 for w, ok in zip(table.values, table.defined)]
    return EstimateAssignment(list(table.labels), estimates, 0.0)


def estimate_mse(assignment: EstimateAssignment, observable,
                 measurement: MeasurementModel, state,
                 guard: float = DENOMINATOR_GUARD) -> float:
    """Mean square deviation sum_m p(m) |A_w(m) - alpha_m|^2."""
    table = weak_value_table(observable, measurement, state, guard=guard)
    if len(assignment.estimates) != len(table.values):
        raise DimensionMismatch("assignment length differs from outcome count")
    total = 0.0
    for p, w, ok, alpha in zip(table.probabilities, table.values,
                               table.defined, assignment.estimates):
        if ok:
            total += float(p) * abs(w - complex(alpha)) ** 2
    return total


def estimate_operator_mse(assignment: EstimateAssignment, observable,
                          measurement: MeasurementModel, state) -> float:
    """Direct route <(A - A_est)† (A - A_est)> for a maximal measurement.

    A_est is the normal operator sum_m alpha_m |m><m|; this equals the
    classical mean square deviation and serves as its independent check.
    """
    if measurement.kind != "rank1_projective":
        raise DimensionMismatch("estimate operator needs a maximal measurement")
    op = as_operator_matrix(observable)
    st = as_state(state)
    est = np.zeros_like(op)
    for idx, alpha in enumerate(assignment.estimates):
        ket = measurement.element_vector(idx)
        est = est + complex(alpha) * np.outer(ket, ket.conj())
    diff = op - est
    return float(st.expectation(dag(diff) @ diff).real)


@dataclass
class CounterexampleRecord:
    """A triple-product instance whose weak-value average misses the target."""

    dim: int
    trial_index: int
    trial_seed: int
    lhs: complex
    rhs: complex
    discrepancy: float
    observable_a: Observable
    observable_b: Observable
    observable_c: Observable
    state: QuantumState
    measurement: MeasurementModel

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "trial_index": self.trial_index,
            "trial_seed": self.trial_seed,
            "lhs": complex_to_pair(self.lhs),
            "rhs": complex_to_pair(self.rhs),
            "discrepancy": self.discrepancy,
            "a": observable_to_json(self.observable_a),
            "b": observable_to_json(self.observable_b),
            "c": observable_to_json(self.observable_c),
            "state": state_to_json(self.state),
            "measurement": measurement_to_json(self.measurement),
        }


def _triple_product_trial(dim: int, trial_seed: int,
                          guard: float = DENOMINATOR_GUARD):
    """Draw one random triple-product instance and evaluate both sides."""
    rng = np.random.default_rng(trial_seed)
    a = random_bounded_hermitian(dim, rng)
    b = random_bounded_hermitian(dim, rng)
    c = random_bounded_hermitian(dim, rng)
    psi = random_pure_state(dim, rng)
    m = random_rank1_povm(dim, rng)

    table_a = weak_value_table(a, m, psi, guard=guard)
    table_b = weak_value_table(b, m, psi, guard=guard)
    table_c = weak_value_table(c, m, psi, guard=guard)
    lhs = 0.0 + 0.0j
    for p, wa, wb, wc, ok in zip(table_a.probabilities, table_a.values,
                                 table_b.values, table_c.values, table_a.defined):
        if ok:
            lhs += p * np.conj(wa) * wb * wc
    rhs = complex(psi.vector.conj() @ (dag(a) @ b @ c @ psi.vector))
    return lhs, rhs, a, b, c, psi, m


def triple_product_counterexample(dim: int, trials: int, master_seed: int,
                                  threshold: float,
                                  guard: float = DENOMINATOR_GUARD):
    """Search for an instance where the triple weak-value average fails.

    Returns the first CounterexampleRecord with discrepancy above
    `threshold`, or None when no trial exceeds it. Trial seeds derive
    from `master_seed` by counter splitting, so any hit is replayable.
    """
    if dim < 2:
        raise ValueError(f"invalid dimension {dim}")
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    for trial in range(trials):
        seed = derive_trial_seed(master_seed, 0, dim, trial)
        lhs, rhs, a, b, c, psi, m = _triple_product_trial(dim, seed, guard=guard)
        disc = abs(lhs - rhs)
        if disc > threshold:
            return CounterexampleRecord(dim, trial, seed, lhs, rhs, float(disc),
                                        Observable(a), Observable(b), Observable(c),
                                        psi, m)
    return None


def replay_triple_product_trial(dim: int, trial_seed: int,
                                guard: float = DENOMINATOR_GUARD) -> float:
    """Recompute the discrepancy of a recorded trial, bit for bit."""
    lhs, rhs, *_ = _triple_product_trial(dim, trial_seed, guard=guard)
    return float(abs(lhs - rhs))


def derive_trial_seed(master_seed: int, stream: int, dim: int, trial: int) -> int:
    """Deterministic 64-bit per-trial seed from a master seed."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(stream, dim, trial))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
