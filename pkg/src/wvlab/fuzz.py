"""Seeded randomized verification suites over every checked relation.

Each suite draws random instances per (dimension, trial index), with the
trial seed derived from the master seed by counter splitting, evaluates
its family of relations, and tallies verdicts. Failing trials are
serialized in full so they can be replayed from their seed alone.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .errors import ConfigError, DegenerateDecomposition, UndefinedPostselection
from .linalg import random_ginibre, random_haar_unitary, random_hermitian
from .reports import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    SATURATED,
    SKIPPED,
    boolean_report,
    identity_report,
    inequality_report,
    skipped_report,
)
from .states import (
    Observable,
    QuantumState,
    measurement_to_json,
    observable_to_json,
    random_density_operator,
    random_povm,
    random_projective_povm,
    random_pure_state,
    random_rank1_povm,
    state_to_json,
)
from .uncertainty import (
    nonhermitian_uncertainty_check,
    robertson_schrodinger_check,
    unitary_pair_summary,
    unitary_uncertainty_checks,
)
from .weak_stats import (
    anomalous_decomposition,
    complementarity_product,
    fourier_pair_product,
    incompatibility_profile,
    projector_weak_value_pair,
    strong_sequential_distribution,
    tradeoff_suite,
    weak_joint_distribution,
)
from .weak_values import (
    EstimateAssignment,
    average_reconstruction_check,
    derive_trial_seed,
    estimate_mse,
    estimate_operator_mse,
    optimal_estimate,
    product_representation_check,
    triple_product_counterexample,
    weak_value,
    weak_value_table,
)

SUITES = (
    "product_rep",
    "heisenberg",
    "unitary",
    "estimate",
    "complementarity",
    "weak_stats",
    "strong_seq",
    "triple_counterexample",
)

TRIPLE_THRESHOLD = 0.01


@dataclass
class SuiteConfig:
    """Configuration of one fuzz run; `trials` is the count per dimension."""

    suites: tuple = SUITES
    dim_lo: int = 2
    dim_hi: int = 4
    trials: int = 1000
    master_seed: int = 42
    tol: float = 1e-9
    output_path: str | None = None
    format: str = "json"

    def validate(self) -> None:
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suites: {unknown}")
        if not self.suites:
            raise ConfigError("at least one suite is required")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not (2 <= self.dim_lo <= self.dim_hi <= 64):
            raise ConfigError(f"dims [{self.dim_lo}, {self.dim_hi}] outside [2, 64]")
        if self.tol <= 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.format!r}")

    def echo(self) -> dict:
        return {
            "suites": [s for s in SUITES if s in self.suites],
            "dims": [self.dim_lo, self.dim_hi],
            "trials": self.trials,
            "master_seed": self.master_seed,
            "tol": self.tol,
        }


def suite_trial_seed(master_seed: int, suite: str, dim: int, trial: int) -> int:
    """Per-trial seed from (master, suite, dim, trial) counter splitting."""
    return derive_trial_seed(master_seed, SUITES.index(suite) + 1, dim, trial)


# -- per-suite trial bodies ---------------------------------------------------
# Each returns (reports, instance_builder); the builder is only invoked
# when some report fails, to serialize the instance for replay.


def _trial_product_rep(dim, rng, tol):
    herm_a = random_hermitian(dim, rng)
    herm_b = random_hermitian(dim, rng)
    gen_a = random_ginibre(dim, dim, rng)
    gen_b = random_ginibre(dim, dim, rng)
    psi = random_pure_state(dim, rng)
    povm = random_rank1_povm(dim, rng)

    reports = [
        average_reconstruction_check(herm_a, povm, psi, tol=tol),
        product_representation_check(herm_a, herm_b, povm, psi, tol=tol),
        product_representation_check(gen_a, gen_b, povm, psi, tol=tol),
    ]

    table_a = weak_value_table(gen_a, povm, psi)
    table_b = weak_value_table(gen_b, povm, psi)
    table_sum = weak_value_table(gen_a + gen_b, povm, psi)
    worst = 0.0
    for wa, wb, ws, ok in zip(table_a.values, table_b.values, table_sum.values,
                              table_a.defined):
        if ok:
            worst = max(worst, abs(ws - wa - wb))
    reports.append(identity_report("weak-value-linearity", worst, 0.0, tol=1e-10))

    def instance():
        return {
            "hermitian_a": observable_to_json(Observable(herm_a)),
            "hermitian_b": observable_to_json(Observable(herm_b)),
            "general_a": observable_to_json(Observable(gen_a)),
            "general_b": observable_to_json(Observable(gen_b)),
            "state": state_to_json(psi),
            "measurement": measurement_to_json(povm),
        }

    return reports, instance


def _trial_heisenberg(dim, rng, tol):
    herm_a = random_hermitian(dim, rng)
    herm_b = random_hermitian(dim, rng)
    gen_a = random_ginibre(dim, dim, rng)
    gen_b = random_ginibre(dim, dim, rng)
    psi = random_pure_state(dim, rng)
    povm = random_rank1_povm(dim, rng)

    reports = [
        robertson_schrodinger_check(herm_a, herm_b, psi, povm, tol=tol),
        nonhermitian_uncertainty_check(gen_a, gen_b, psi, tol=tol),
    ]

    def instance():
        return {
            "hermitian_a": observable_to_json(Observable(herm_a)),
            "hermitian_b": observable_to_json(Observable(herm_b)),
            "general_a": observable_to_json(Observable(gen_a)),
            "general_b": observable_to_json(Observable(gen_b)),
            "state": state_to_json(psi),
            "measurement": measurement_to_json(povm),
        }

    return reports, instance


def _trial_unitary(dim, rng, tol):
    u_mat = random_haar_unitary(dim, rng)
    v_mat = random_haar_unitary(dim, rng)
    psi = random_pure_state(dim, rng)
    summary = unitary_pair_summary(u_mat, v_mat, psi)
    reports = unitary_uncertainty_checks(summary, tol=tol)
    reports.append(identity_report("unitary-rotation-invariant",
                                   summary.x ** 2 + summary.y ** 2,
                                   summary.u ** 2 + summary.v ** 2, tol=1e-12))

    def instance():
        return {
            "u": observable_to_json(Observable(u_mat)),
            "v": observable_to_json(Observable(v_mat)),
            "state": state_to_json(psi),
        }

    return reports, instance


def _trial_estimate(dim, rng, tol):
    op = random_ginibre(dim, dim, rng)
    psi = random_pure_state(dim, rng)
    povm = random_rank1_povm(dim, rng)

    optimal = optimal_estimate(op, povm, psi)
    eps_opt = estimate_mse(optimal, op, povm, psi)
    reports = [identity_report("estimate-optimal-zero", eps_opt, 0.0, tol=1e-12)]

    table = weak_value_table(op, povm, psi)
    real_constrained = EstimateAssignment(
        list(table.labels),
        [complex(w.real, 0.0) if ok else 0.0 + 0.0j
         for w, ok in zip(table.values, table.defined)],
        0.0)
    eps_real = estimate_mse(real_constrained, op, povm, psi)
    imag_sum = sum(float(p) * w.imag ** 2
                   for p, w, ok in zip(table.probabilities, table.values, table.defined)
                   if ok)
    reports.append(identity_report("estimate-imaginary-penalty", eps_real, imag_sum,
                                   tol=1e-10))

    noise = random_ginibre(len(optimal.estimates), 1, rng).reshape(-1)
    noise = noise / np.linalg.norm(noise)
    perturbed = EstimateAssignment(list(optimal.labels),
                                   [w + n for w, n in zip(optimal.estimates, noise)],
                                   0.0)
    eps_pert = estimate_mse(perturbed, op, povm, psi)
    expected = sum(float(p) * abs(n) ** 2
                   for p, n, ok in zip(table.probabilities, noise, table.defined) if ok)
    reports.append(identity_report("estimate-perturbation-deviation", eps_pert,
                                   expected, tol=1e-10))
    reports.append(boolean_report("estimate-perturbation-positive", eps_pert > 0.0))
    reports.append(identity_report("estimate-route-agreement", eps_pert,
                                   estimate_operator_mse(perturbed, op, povm, psi),
                                   tol=tol))

    def instance():
        return {
            "observable": observable_to_json(Observable(op)),
            "state": state_to_json(psi),
            "measurement": measurement_to_json(povm),
        }

    return reports, instance


def _random_unit_ket(dim, rng):
    v = random_ginibre(dim, 1, rng).reshape(-1)
    return v / np.linalg.norm(v)


def _trial_complementarity(dim, rng, tol):
    a_vec = _random_unit_ket(dim, rng)
    b_vec = _random_unit_ket(dim, rng)
    psi = random_pure_state(dim, rng)
    rho = random_density_operator(dim, int(rng.integers(1, dim + 1)), rng)
    j = int(rng.integers(0, dim))
    k = int(rng.integers(0, dim))

    reports = []
    try:
        reports.append(complementarity_product(a_vec, b_vec, psi, tol=1e-10))
        reports.append(complementarity_product(a_vec, b_vec, rho, tol=1e-10))
        pair = projector_weak_value_pair(a_vec, b_vec, psi)
        reports.append(identity_report("filter-identity",
                                       max(pair.filter_residuals), 0.0, tol=1e-10))
    except UndefinedPostselection:
        reports.append(skipped_report("complementarity-product",
                                      notes="postselection below guard"))
    try:
        product = fourier_pair_product(dim, j, k, psi)
        reports.append(identity_report("fourier-pair-product", product,
                                       1.0 / dim, tol=1e-10))
        mixed_product = fourier_pair_product(dim, j, k, rho)
        reports.append(inequality_report("fourier-pair-mixed-bound",
                                         mixed_product.real, 1.0 / dim, tol=tol))
    except UndefinedPostselection:
        reports.append(skipped_report("fourier-pair-product",
                                      notes="postselection below guard"))
    try:
        split = anomalous_decomposition(a_vec, b_vec, psi)
        direct = weak_value(np.outer(a_vec, a_vec.conj()), b_vec, psi)
        reports.append(identity_report("anomalous-split-reassembly",
                                       split.reassembled(), direct, tol=1e-10))
    except (DegenerateDecomposition, UndefinedPostselection) as exc:
        reports.append(skipped_report("anomalous-split-reassembly", notes=str(exc)))

    def instance():
        return {
            "a_vec": state_to_json(QuantumState.pure(a_vec)),
            "b_vec": state_to_json(QuantumState.pure(b_vec)),
            "pure_state": state_to_json(psi),
            "mixed_state": state_to_json(rho),
            "fourier_indices": [j, k],
        }

    return reports, instance


def _trial_weak_stats(dim, rng, tol):
    use_mixed = rng.random() < 0.5
    state = (random_density_operator(dim, int(rng.integers(1, dim + 1)), rng)
             if use_mixed else random_pure_state(dim, rng))
    use_rank1 = rng.random() < 0.5
    if use_rank1:
        a_model = random_rank1_povm(dim, rng)
        b_model = random_rank1_povm(dim, rng)
    else:
        a_model = random_povm(dim, int(rng.integers(2, dim + 2)), rng)
        b_model = random_povm(dim, int(rng.integers(2, dim + 2)), rng)

    joint = weak_joint_distribution(a_model, b_model, state)
    profile = incompatibility_profile(a_model, b_model, state)

    reports = [
        identity_report("joint-normalization", float(joint.grid.sum()), 1.0, tol=1e-10),
        identity_report("joint-marginal-a",
                        float(np.max(np.abs(joint.grid.sum(axis=1) - joint.marginal_a))),
                        0.0, tol=1e-10),
        identity_report("joint-marginal-b",
                        float(np.max(np.abs(joint.grid.sum(axis=0) - joint.marginal_b))),
                        0.0, tol=1e-10),
        boolean_report("anomaly-iff-criterion",
                       (joint.grid.min() < -1e-12) == (joint.anomaly_l1 > 1.0 + 1e-12),
                       notes=f"min={joint.grid.min():.3e} l1={joint.anomaly_l1:.12f}"),
        inequality_report("incompatibility-range", profile.total, 1.0, tol=tol),
        inequality_report("incompatibility-nonnegative", 0.0, float(profile.grid.min()),
                          tol=tol),
    ]

    rho = state.density_matrix()
    a_stack = np.stack(a_model.elements)
    b_stack = np.stack(b_model.elements)
    z_ab = np.einsum("ij,ajk,bki->ab", rho, a_stack, b_stack)
    z_ba = np.einsum("ij,bjk,aki->ab", rho, b_stack, a_stack)
    recombined = (0.5 * (z_ab + z_ba).real) ** 2 + 0.25 * np.abs(z_ab - z_ba) ** 2
    z_worst = float(np.max(np.abs(recombined - np.abs(z_ab) ** 2)))
    reports.append(identity_report("cross-moment-identity", z_worst, 0.0, tol=1e-10))

    reports.extend(tradeoff_suite(a_model, b_model, state, tol=tol))

    def instance():
        return {
            "state": state_to_json(state),
            "measurement_a": measurement_to_json(a_model),
            "measurement_b": measurement_to_json(b_model),
        }

    return reports, instance


def _trial_strong_seq(dim, rng, tol):
    use_mixed = rng.random() < 0.5
    state = (random_density_operator(dim, int(rng.integers(1, dim + 1)), rng)
             if use_mixed else random_pure_state(dim, rng))
    use_rank1 = rng.random() < 0.5
    if use_rank1:
        a_model = random_rank1_povm(dim, rng)
        b_model = random_rank1_povm(dim, rng)
    else:
        a_model = random_projective_povm(dim, rng)
        b_model = random_projective_povm(dim, rng)

    result = strong_sequential_distribution(a_model, b_model, state, tol=tol)
    reports = list(result.reports)

    def instance():
        return {
            "state": state_to_json(state),
            "measurement_a": measurement_to_json(a_model),
            "measurement_b": measurement_to_json(b_model),
        }

    return reports, instance


TRIAL_RUNNERS = {
    "product_rep": _trial_product_rep,
    "heisenberg": _trial_heisenberg,
    "unitary": _trial_unitary,
    "estimate": _trial_estimate,
    "complementarity": _trial_complementarity,
    "weak_stats": _trial_weak_stats,
    "strong_seq": _trial_strong_seq,
}


def _tally(relations: dict, report, seed: int) -> None:
    entry = relations.setdefault(report.relation_id, {
        PASS: 0, FAIL: 0, SATURATED: 0, SKIPPED: 0, INCONCLUSIVE: 0,
        "worst_slack": None, "worst_seed": None,
    })
    entry[report.verdict] += 1
    if report.verdict in (PASS, FAIL, SATURATED):
        if entry["worst_slack"] is None or report.slack < entry["worst_slack"]:
            entry["worst_slack"] = report.slack
            entry["worst_seed"] = seed


def run_suites(config: SuiteConfig) -> dict:
    """Execute the configured suites and assemble the aggregate report.

    The result is deterministic for a fixed config: trial seeds are
    derived by counter splitting and the report is ordered by suite,
    dimension and trial index.
    """
    config.validate()
    relations: dict = {}
    failures: list = []
    suites_summary: dict = {}
    counterexamples: list = []

    for suite in SUITES:
        if suite not in config.suites:
            continue
        trial_count = 0
        failure_count = 0
        for dim in range(config.dim_lo, config.dim_hi + 1):
            if suite == "triple_counterexample":
                sub_master = suite_trial_seed(config.master_seed, suite, dim, 0)
                record = triple_product_counterexample(dim, config.trials, sub_master,
                                                       TRIPLE_THRESHOLD)
                trial_count += config.trials
                found = record is not None
                report = boolean_report(
                    "triple-product-counterexample-found", found,
                    seed=record.trial_seed if found else sub_master,
                    notes=(f"discrepancy={record.discrepancy:.17g}" if found
                           else f"none above {TRIPLE_THRESHOLD}"))
                _tally(relations, report, report.instance_seed)
                if found:
                    counterexamples.append(record.to_json_dict())
                else:
                    failure_count += 1
                    failures.append({
                        "suite": suite, "dim": dim, "trial": 0,
                        "seed": sub_master,
                        "reports": [report.to_json_dict()],
                        "instance": {"threshold": TRIPLE_THRESHOLD,
                                     "trials": config.trials},
                    })
                continue

            runner = TRIAL_RUNNERS[suite]
            for trial in range(config.trials):
                seed = suite_trial_seed(config.master_seed, suite, dim, trial)
                rng = np.random.default_rng(seed)
                reports, instance_builder = runner(dim, rng, config.tol)
                trial_count += 1
                failed = False
                for report in reports:
                    report.instance_seed = seed
                    _tally(relations, report, seed)
                    failed = failed or report.verdict == FAIL
                if failed:
                    failure_count += 1
                    failures.append({
                        "suite": suite, "dim": dim, "trial": trial, "seed": seed,
                        "reports": [r.to_json_dict() for r in reports],
                        "instance": instance_builder(),
                    })
        suites_summary[suite] = {"trials": trial_count, "failures": failure_count}

    return {
        "tool": "wvlab",
        "version": __version__,
        "config": config.echo(),
        "relations": relations,
        "suites": suites_summary,
        "counterexamples": counterexamples,
        "failures": failures,
        "total_failures": sum(s["failures"] for s in suites_summary.values()),
    }


def report_json_text(aggregate: dict) -> str:
    return json.dumps(aggregate, indent=2, sort_keys=True) + "\n"


def report_csv_text(aggregate: dict) -> str:
    """Per-relation summary rows; failing instances live in the JSON format."""
    import csv as _csv
    import io as _io

    buf = _io.StringIO()
    writer = _csv.writer(buf, lineterminator="\n")
    writer.writerow(["relation_id", "pass", "fail", "saturated", "skipped",
                     "inconclusive", "worst_slack", "worst_seed"])
    for relation_id in sorted(aggregate["relations"]):
        entry = aggregate["relations"][relation_id]
        worst = entry["worst_slack"]
        writer.writerow([
            relation_id, entry[PASS], entry[FAIL], entry[SATURATED],
            entry[SKIPPED], entry[INCONCLUSIVE],
            format(worst, ".17g") if worst is not None else "",
            entry["worst_seed"] if entry["worst_seed"] is not None else "",
        ])
    return buf.getvalue()


@dataclass
class ReplayResult:
    suite: str
    dim: int
    seed: int
    reports: list = field(default_factory=list)


def replay_trial(suite: str, dim: int, seed: int, tol: float = 1e-9) -> ReplayResult:
    """Re-run one recorded trial from its seed; values match bit for bit."""
    if suite not in TRIAL_RUNNERS:
        raise ConfigError(f"suite {suite!r} has no per-trial replay")
    rng = np.random.default_rng(seed)
    reports, _ = TRIAL_RUNNERS[suite](dim, rng, tol)
    for report in reports:
        report.instance_seed = seed
    return ReplayResult(suite=suite, dim=dim, seed=seed, reports=reports)
