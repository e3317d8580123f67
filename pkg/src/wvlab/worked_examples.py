"""Hand-checkable worked examples, printed with live verification.

Each example builds a small fixed instance, prints the inputs and every
intermediate quantity, and re-verifies the relation it illustrates.
"""

import math

import numpy as np

from .errors import UnknownExample
from .figure import build_region_dataset
from .states import QuantumState, computational_basis, pauli
from .weak_stats import (
    complementarity_product,
    cross_moment_identity_check,
    strong_sequential_distribution,
    tradeoff_suite,
    weak_joint_distribution,
)
from .weak_values import weak_value


def _example_anomalous_sigma_x(echo) -> None:
    psi = QuantumState.pure([1.0, 0.0])
    post = np.array([1.0, 3.0], dtype=complex) / math.sqrt(10.0)
    value = weak_value(pauli("x"), post, psi)
    echo("weak value of sigma_x, preselected |0>, postselected (|0>+3|1>)/sqrt(10)")
    echo(f"  numerator  <post|sigma_x|psi> = {complex(post.conj() @ (pauli('x') @ psi.vector)):.6f}")
    echo(f"  denominator <post|psi>        = {complex(post.conj() @ psi.vector):.6f}")
    echo(f"  weak value = {value:.6f}")
    echo("  the operator spectrum is [-1, +1]; the weak value 3.0 lies outside it"
         " (anomalous)")
    assert abs(value - 3.0) < 1e-12


def _example_comp_product(echo) -> None:
    a = np.array([1.0, 0.0], dtype=complex)
    b = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
    psi = QuantumState.pure(np.array([1.0, 1.0j]) / math.sqrt(2.0))
    report = complementarity_product(a, b, psi)
    echo("interchanged projector weak values, a = |0>, b = |+>, psi = (|0>+i|1>)/sqrt(2)")
    echo(f"  product of the two weak values = {report.lhs:.6f}")
    echo(f"  squared overlap |<a|b>|^2      = {report.rhs:.6f}")
    echo(f"  residual = {abs(report.lhs - report.rhs):.3e} (the product is real and"
         " state-independent)")
    assert report.verdict != "fail"


def _example_eq33_qubit(echo) -> None:
    psi = QuantumState.pure(np.array([1.0, 1.0j]) / math.sqrt(2.0))
    a_elem = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    plus = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
    b_elem = np.outer(plus, plus.conj())
    z = complex(np.trace(psi.density_matrix() @ a_elem @ b_elem))
    echo("keystone split for psi = (|0>+i|1>)/sqrt(2), A = |0><0|, B = |+><+|")
    echo(f"  cross moment tr(rho A B) = {z:.6f}  (expected (1+i)/4)")
    echo(f"  weak probability p_w = Re = {z.real:.6f};  p_w^2 = {z.real ** 2:.6f}")
    echo(f"  incompatibility I = Im^2  = {z.imag ** 2:.6f}")
    echo(f"  p_w^2 + I = {z.real ** 2 + z.imag ** 2:.6f} = |tr(rho A B)|^2 = {abs(z) ** 2:.6f}")
    echo("  i.e. 1/16 + 1/16 = 1/8")
    report = cross_moment_identity_check(a_elem, b_elem, psi)
    echo(f"  identity residual = {-report.slack:.3e}")
    assert report.verdict != "fail"


def _example_negative_pw(echo) -> None:
    from .states import MeasurementModel

    psi = QuantumState.pure(np.array([2.0, -1.0]) / math.sqrt(5.0))
    plus = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
    minus = np.array([1.0, -1.0], dtype=complex) / math.sqrt(2.0)
    a_model = MeasurementModel.from_basis(np.column_stack([plus, minus]),
                                          labels=["+", "-"])
    b_model = computational_basis(2)
    joint = weak_joint_distribution(a_model, b_model, psi)
    echo("weak joint probabilities for psi = (2|0>-|1>)/sqrt(5), A in the |+/-> basis,"
         " B in the computational basis")
    for i, a_lbl in enumerate(joint.a_labels):
        for j, b_lbl in enumerate(joint.b_labels):
            echo(f"  p_w({a_lbl}, {b_lbl}) = {joint.grid[i, j]:+.6f}")
    echo(f"  cell (+, x1) is negative: {joint.grid[0, 1]:+.6f} (expected -0.1)")
    echo(f"  total absolute mass = {joint.anomaly_l1:.6f} > 1, the anomaly signature")
    assert abs(joint.grid[0, 1] + 0.1) < 1e-12
    assert joint.anomaly_l1 > 1.0 + 1e-12
    echo("  bounds against the strong sequential statistics:")
    seq = strong_sequential_distribution(a_model, b_model, psi)
    for report in seq.reports:
        echo(f"    {report.relation_id}: slack {report.slack:+.3e} ({report.verdict})")
    for report in tradeoff_suite(a_model, b_model, psi):
        echo(f"    {report.relation_id}: slack {report.slack:+.3e} ({report.verdict})")


def _example_fig1(echo) -> None:
    dataset = build_region_dataset(0.25, math.pi, samples=64, scatter_samples=200)
    echo("unitary-pair uncertainty regions at overlap 0.25, phase pi")
    for curve in dataset.curves:
        echo(f"  curve {curve.curve_id}: {curve.u.size} points, "
             f"u in [{curve.u.min():.3f}, {curve.u.max():.3f}], "
             f"v in [{curve.v.min():.3f}, {curve.v.max():.3f}]")
    inside = sum(dataset.contained)
    echo(f"  scatter: {inside}/{len(dataset.contained)} random pairs satisfy all"
         " region constraints")
    assert dataset.all_contained()


WORKED_EXAMPLES = {
    "anomalous-sigma-x": _example_anomalous_sigma_x,
    "comp-product": _example_comp_product,
    "eq33-qubit": _example_eq33_qubit,
    "negative-pw": _example_negative_pw,
    "fig1": _example_fig1,
}


def run_worked_example(name: str, echo=print) -> None:
    """Print one named worked example, verifying its relation live."""
    try:
        fn = WORKED_EXAMPLES[name]
    except KeyError:
        known = ", ".join(sorted(WORKED_EXAMPLES))
        raise UnknownExample(f"unknown example {name!r}; known names: {known}") from None
    fn(echo)
