"""Uncertainty relations built from weak-value statistics.

The weak values of two operators over a maximal measurement form complex
random variables under the outcome distribution. Their classical variance
and covariance reproduce the quantum variance and covariance exactly, so
the Schwarz inequality for complex random variables becomes the
Schrodinger-strengthened Heisenberg relation, its generalization to
arbitrary operators, and a family of region constraints for pairs of
unitary operators in the (|<U>|, |<V>|) plane.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidState,
    InvalidWeights,
    LengthMismatch,
    NonHermitianInput,
    NotUnitary,
)
from .linalg import dag, max_abs
from .reports import (
    FAIL,
    RelationReport,
    boolean_report,
    inequality_report,
    skipped_report,
)
from .states import MeasurementModel, as_operator_matrix, as_state
from .weak_values import DENOMINATOR_GUARD, weak_value_table

BARGMANN_GUARD = 1e-12


@dataclass
class ComplexRVStats:
    """Mean and variance of a complex random variable."""

    mean: complex
    variance: float


def _check_weights(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if np.any(w < -1e-12):
        raise InvalidWeights(f"negative weight {w.min():.3e}")
    if abs(float(w.sum()) - 1.0) > 1e-10:
        raise InvalidWeights(f"weights sum to {float(w.sum()):.12f}")
    return np.clip(w, 0.0, None)


def complex_rv_stats(values, weights) -> ComplexRVStats:
    """Weighted mean and variance of complex samples.

    Variance is <|a|^2> - |<a>|^2, clamped to zero within -1e-12.
    """
    vals = np.asarray(values, dtype=complex)
    w = _check_weights(weights)
    if vals.shape != w.shape:
        raise LengthMismatch(f"{vals.shape} values vs {w.shape} weights")
    mean = complex(np.sum(w * vals))
    second = float(np.sum(w * np.abs(vals) ** 2))
    var = second - abs(mean) ** 2
    if var < -1e-12:
        raise InvalidWeights(f"variance {var:.3e} below clamp window")
    return ComplexRVStats(mean, max(var, 0.0))


def complex_rv_covariance(values_a, values_b, weights) -> complex:
    """Weighted covariance <conj(a) b> - conj(<a>) <b>."""
    va = np.asarray(values_a, dtype=complex)
    vb = np.asarray(values_b, dtype=complex)
    w = _check_weights(weights)
    if va.shape != vb.shape or va.shape != w.shape:
        raise LengthMismatch("mismatched sample/weight lengths")
    mean_a = complex(np.sum(w * va))
    mean_b = complex(np.sum(w * vb))
    return complex(np.sum(w * np.conj(va) * vb)) - np.conj(mean_a) * mean_b


def operator_variance(observable, state) -> float:
    """General-operator variance <A† A> - |<A>|^2 (clamped at zero).

    Vanishes exactly when the state is an eigenstate of the operator,
    and matches the classical variance of the operator's weak values
    under any maximal measurement for pure states.
    """
    op = as_operator_matrix(observable)
    st = as_state(state)
    second = st.expectation(dag(op) @ op).real
    mean = st.expectation(op)
    var = float(second - abs(mean) ** 2)
    if var < -1e-12:
        raise InvalidState(f"variance {var:.3e} below clamp window")
    return max(var, 0.0)


def _weak_value_arrays(observable, measurement, state, guard):
    table = weak_value_table(observable, measurement, state, guard=guard)
    if not all(table.defined):
        return None, None
    return np.array(table.values, dtype=complex), table.probabilities


def robertson_schrodinger_check(observable_a, observable_b, state,
                                measurement: MeasurementModel,
                                tol: float = 1e-9,
                                guard: float = DENOMINATOR_GUARD,
                                seed: int = 0) -> RelationReport:
    """Var A * Var B >= Cov(A,B)^2 + |<[A,B]>|^2 / 4 via two routes.

    The classical route computes the variances and covariance of the
    weak-value random variables; the quantum route evaluates operator
    averages directly. The verdict fails if the routes disagree beyond
    `tol` or the inequality slack drops below -tol.
    """
    a = as_operator_matrix(observable_a)
    b = as_operator_matrix(observable_b)
    for name, m in (("A", a), ("B", b)):
        if max_abs(m - dag(m)) > 1e-10:
            raise NonHermitianInput(f"operator {name} is not Hermitian")
    st = as_state(state)
    if st.kind != "pure":
        raise InvalidState("the dual-route check is implemented for pure states only")

    mean_a = st.expectation(a)
    mean_b = st.expectation(b)
    var_a = operator_variance(a, st)
    var_b = operator_variance(b, st)
    cov_q = 0.5 * st.expectation(a @ b + b @ a).real - (mean_a * mean_b).real
    comm = st.expectation(a @ b - b @ a)

    values_a, probs = _weak_value_arrays(a, measurement, st, guard)
    route_note = "route_residual=n/a"
    route_residual = 0.0
    if values_a is not None:
        values_b, _ = _weak_value_arrays(b, measurement, st, guard)
        if values_b is not None:
            stats_a = complex_rv_stats(values_a, probs)
            stats_b = complex_rv_stats(values_b, probs)
            cov_c = complex_rv_covariance(values_a, values_b, probs)
            route_residual = max(
                abs(stats_a.variance - var_a),
                abs(stats_b.variance - var_b),
                abs(cov_c - (st.expectation(a @ b) - mean_a * mean_b)),
            )
            route_note = f"route_residual={route_residual:.3e}"

    lhs = cov_q ** 2 + 0.25 * abs(comm) ** 2
    rhs = var_a * var_b
    report = inequality_report("schrodinger-uncertainty", lhs, rhs, tol=tol,
                               seed=seed, notes=route_note)
    if route_residual > tol:
        report.verdict = FAIL
        report.notes = route_note + " (routes disagree)"
    return report


def nonhermitian_uncertainty_check(observable_a, observable_b, state,
                                   tol: float = 1e-9,
                                   seed: int = 0) -> RelationReport:
    """Var A * Var B >= |<A† B> - <A†><B>|^2 for arbitrary operators."""
    a = as_operator_matrix(observable_a)
    b = as_operator_matrix(observable_b)
    if a.shape != b.shape:
        raise DimensionMismatch("operator shapes differ")
    st = as_state(state)
    cov = st.expectation(dag(a) @ b) - np.conj(st.expectation(a)) * st.expectation(b)
    lhs = abs(cov) ** 2
    rhs = operator_variance(a, st) * operator_variance(b, st)
    return inequality_report("general-covariance-bound", lhs, rhs, tol=tol, seed=seed)


@dataclass
class UnitaryPairSummary:
    """Scalars controlling the unitary-pair uncertainty regions.

    u and v are the expectation moduli of the two unitaries, `overlap`
    is |<U† V>|, and `bargmann_phase` is the phase of <U><U† V><V†>
    (None when that invariant has negligible modulus). x and y are the
    diagonal rotation of (u, v).
    """

    u: float
    v: float
    overlap: float
    bargmann_phase: float | None
    x: float
    y: float


def unitary_pair_summary(unitary_u, unitary_v, state,
                         tol: float = 1e-10) -> UnitaryPairSummary:
    """Expectation moduli, overlap and Bargmann phase for two unitaries."""
    u_mat = as_operator_matrix(unitary_u)
    v_mat = as_operator_matrix(unitary_v)
    if u_mat.shape != v_mat.shape:
        raise DimensionMismatch("unitary shapes differ")
    eye = np.eye(u_mat.shape[0])
    for name, m in (("U", u_mat), ("V", v_mat)):
        if max_abs(dag(m) @ m - eye) > tol:
            raise NotUnitary(f"operator {name} fails unitarity at tol {tol:.1e}")
    st = as_state(state)
    mean_u = st.expectation(u_mat)
    mean_v = st.expectation(v_mat)
    cross = st.expectation(dag(u_mat) @ v_mat)
    u = abs(mean_u)
    v = abs(mean_v)
    overlap = abs(cross)
    bargmann = mean_u * cross * np.conj(mean_v)
    phase = float(np.angle(bargmann)) if abs(bargmann) >= BARGMANN_GUARD else None
    return UnitaryPairSummary(u=u, v=v, overlap=overlap, bargmann_phase=phase,
                              x=(u + v) / math.sqrt(2.0), y=(u - v) / math.sqrt(2.0))


def unitary_uncertainty_checks(summary: UnitaryPairSummary,
                               tol: float = 1e-9,
                               seed: int = 0) -> list[RelationReport]:
    """Evaluate the unitary-pair region constraints on one summary.

    Returns reports for the overlap ellipse, the geometric-mean
    hyperbola bound, the rotated-axes ellipse form, the phase-corrected
    ellipse, and the implication chain phase-ellipse => ellipse =>
    hyperbola checked as booleans.
    """
    u, v, ov = summary.u, summary.v, summary.overlap
    reports = []

    ellipse = inequality_report("unitary-ellipse", u * u + v * v - 2 * u * v * ov,
                                1.0 - ov * ov, tol=tol, seed=seed)
    reports.append(ellipse)

    hyperbola = inequality_report("unitary-hyperbola", u * v, (1.0 + ov) / 2.0,
                                  tol=tol, seed=seed)
    reports.append(hyperbola)

    if ov > 1.0 - 1e-9:
        reports.append(skipped_report("unitary-rotated-ellipse", seed=seed,
                                      notes="degenerate ellipse at unit overlap"))
    else:
        lhs = summary.x ** 2 / (1.0 + ov) + summary.y ** 2 / (1.0 - ov)
        reports.append(inequality_report("unitary-rotated-ellipse", lhs, 1.0,
                                         tol=tol, seed=seed))

    if summary.bargmann_phase is None:
        cos_phi = 1.0
        phase_note = "bargmann phase undefined; cosine term dropped"
    else:
        cos_phi = math.cos(summary.bargmann_phase)
        phase_note = ""
    phase_ellipse = inequality_report(
        "unitary-phase-ellipse",
        u * u + v * v - 2 * u * v * ov * cos_phi,
        1.0 - ov * ov, tol=tol, seed=seed, notes=phase_note)
    reports.append(phase_ellipse)

    strong_ok = phase_ellipse.slack >= -tol
    mid_ok = ellipse.slack >= -tol
    weak_ok = hyperbola.slack >= -tol
    chain = (not strong_ok or mid_ok) and (not mid_ok or weak_ok)
    reports.append(boolean_report("unitary-implication-chain", chain, seed=seed))
    return reports


@dataclass
class RegionCurve:
    """One boundary curve in the positive (u, v) quadrant."""

    curve_id: str
    u: np.ndarray
    v: np.ndarray


def uncertainty_region_curves(overlap: float, phi: float,
                              samples: int) -> list[RegionCurve]:
    """Boundary curves of the unitary-pair uncertainty regions.

    Emits the overlap ellipse, the hyperbola u*v = (1 + overlap)/2 that
    is tangent to it, and the phase-corrected ellipse at the given phi,
    each sampled at `samples` points inside the positive quadrant.
    """
    if not 0.0 <= overlap < 1.0:
        raise ValueError(f"overlap {overlap} outside [0, 1)")
    if samples < 16:
        raise ValueError("need at least 16 samples per curve")

    curves = [
        _quadrant_ellipse("unitary-ellipse", overlap, overlap, samples),
        _hyperbola_curve(overlap, samples),
        _quadrant_ellipse("unitary-phase-ellipse", overlap,
                          overlap * math.cos(phi), samples),
    ]
    return curves


def _quadrant_ellipse(curve_id: str, overlap: float, cos_term: float,
                      samples: int) -> RegionCurve:
    # Boundary of u^2 + v^2 - 2 u v cos_term = 1 - overlap^2 in rotated
    # coordinates; the positive quadrant is the arc |tan t| <= a/b.
    a = math.sqrt((1.0 - overlap * overlap) / (1.0 - cos_term))
    b = math.sqrt((1.0 - overlap * overlap) / (1.0 + cos_term))
    t_max = math.atan2(a, b)
    t = np.linspace(-t_max, t_max, samples)
    x = a * np.cos(t)
    y = b * np.sin(t)
    u = (x + y) / math.sqrt(2.0)
    v = (x - y) / math.sqrt(2.0)
    return RegionCurve(curve_id, np.clip(u, 0.0, None), np.clip(v, 0.0, None))


def _hyperbola_curve(overlap: float, samples: int) -> RegionCurve:
    level = (1.0 + overlap) / 2.0
    window = 1.05
    u = np.linspace(level / window, window, samples)
    return RegionCurve("unitary-hyperbola", u, level / u)


def mixed_state_summary_via_purification(unitary_u, unitary_v, rho,
                                         tol: float = 1e-10) -> UnitaryPairSummary:
    """Summary for a density operator through its purification.

    Lifts the unitaries as U (x) I on the doubled space; the resulting
    averages equal the direct rho-averages.
    """
    from .states import lift_operator, purify

    st = as_state(rho)
    if st.kind != "mixed":
        raise InvalidState("expected a mixed state")
    psi = purify(st)
    return unitary_pair_summary(lift_operator(unitary_u, st.dim),
                                lift_operator(unitary_v, st.dim), psi, tol=tol)
