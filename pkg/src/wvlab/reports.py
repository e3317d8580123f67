"""Structured verdict records for checked identities and inequalities."""

from dataclasses import dataclass

from .states import complex_to_pair

PASS = "pass"
FAIL = "fail"
SATURATED = "saturated"
SKIPPED = "skipped"
INCONCLUSIVE = "inconclusive"

DEFAULT_TOL = 1e-9
SATURATION_TOL = 1e-7


@dataclass
class RelationReport:
    """Outcome of one relation check.

    For inequalities stated as lhs <= rhs, `slack` is rhs - lhs; for
    identities it is -|lhs - rhs|. In both cases the verdict is `fail`
    exactly when slack < -tol.
    """

    relation_id: str
    lhs: complex | float
    rhs: complex | float
    slack: float
    verdict: str
    instance_seed: int = 0
    notes: str = ""

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL

    def to_json_dict(self) -> dict:
        return {
            "relation_id": self.relation_id,
            "lhs": _number_to_json(self.lhs),
            "rhs": _number_to_json(self.rhs),
            "slack": self.slack,
            "verdict": self.verdict,
            "seed": self.instance_seed,
            "notes": self.notes,
        }


def _number_to_json(value):
    if isinstance(value, complex):
        return complex_to_pair(value)
    return float(value)


def inequality_report(relation_id: str, lhs: float, rhs: float,
                      tol: float = DEFAULT_TOL, seed: int = 0, notes: str = "",
                      saturation_tol: float = SATURATION_TOL) -> RelationReport:
    """Check lhs <= rhs with additive slack tolerance.

    Saturation (|slack| <= saturation_tol) is reported as its own verdict
    to surface boundary cases; it counts as a pass.
    """
    slack = float(rhs) - float(lhs)
    if slack < -tol:
        verdict = FAIL
    elif abs(slack) <= saturation_tol:
        verdict = SATURATED
    else:
        verdict = PASS
    return RelationReport(relation_id, lhs, rhs, slack, verdict, seed, notes)


def identity_report(relation_id: str, lhs, rhs, tol: float = DEFAULT_TOL,
                    seed: int = 0, notes: str = "") -> RelationReport:
    """Check lhs == rhs to within tol; slack is -|lhs - rhs|."""
    residual = abs(complex(lhs) - complex(rhs))
    verdict = FAIL if residual > tol else PASS
    return RelationReport(relation_id, lhs, rhs, -residual, verdict, seed, notes)


def boolean_report(relation_id: str, held: bool, seed: int = 0,
                   notes: str = "") -> RelationReport:
    """Check a logical property (implication chains, biconditionals)."""
    return RelationReport(relation_id, 1.0 if held else 0.0, 1.0,
                          0.0 if held else -1.0, PASS if held else FAIL,
                          seed, notes)


def skipped_report(relation_id: str, seed: int = 0, notes: str = "") -> RelationReport:
    return RelationReport(relation_id, 0.0, 0.0, 0.0, SKIPPED, seed, notes)


def inconclusive_report(relation_id: str, lhs, rhs, seed: int = 0,
                        notes: str = "") -> RelationReport:
    return RelationReport(relation_id, lhs, rhs, 0.0, INCONCLUSIVE, seed, notes)
