"""Region-data emission for the unitary-pair uncertainty diagram.

Writes the three boundary curves plus a rejection-sampled scatter of
random unitary pairs conditioned to the target overlap, as delimited
data, and optionally renders the same dataset to an image file.
"""

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .states import QuantumState
from .uncertainty import (
    UnitaryPairSummary,
    uncertainty_region_curves,
    unitary_pair_summary,
    unitary_uncertainty_checks,
)

SCATTER_SAMPLES = 1000
SCATTER_SEED = 20240917
# Acceptance can drop to ~1e-4 near overlap 0 (the overlap density
# vanishes there), so the cap must leave room for ~1e7 draws.
_MAX_REJECTION_DRAWS = 50_000_000


@dataclass
class RegionDataset:
    """Curves, accepted scatter summaries, and their containment flags."""

    overlap: float
    phi: float
    curves: list
    scatter: list
    contained: list

    def scatter_points(self) -> np.ndarray:
        return np.array([[s.u, s.v] for s in self.scatter])

    def all_contained(self) -> bool:
        return all(self.contained)


def _haar2_batch(rng: np.random.Generator, count: int) -> np.ndarray:
    """Batch of Haar U(2) matrices: random first column, rephased complement."""
    z = rng.standard_normal((count, 2)) + 1j * rng.standard_normal((count, 2))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    phase = np.exp(2j * np.pi * rng.random(count))
    u = np.empty((count, 2, 2), dtype=complex)
    u[:, 0, 0] = z[:, 0]
    u[:, 1, 0] = z[:, 1]
    u[:, 0, 1] = -np.conj(z[:, 1]) * phase
    u[:, 1, 1] = np.conj(z[:, 0]) * phase
    return u


def build_region_dataset(overlap: float, phi: float, samples: int,
                         scatter_samples: int = SCATTER_SAMPLES,
                         scatter_seed: int = SCATTER_SEED,
                         window: float = 0.01,
                         tol: float = 1e-9) -> RegionDataset:
    """Assemble boundary curves and a conditioned random scatter.

    Scatter points come from Haar pairs (U, V) with a random pure state,
    accepted when their overlap falls within `window` of the target.
    The overlap filter runs on vectorized batches; every accepted point
    is then summarized through the scalar path and checked against all
    region constraints using its own overlap and phase.
    """
    curves = uncertainty_region_curves(overlap, phi, samples)
    rng = np.random.default_rng(scatter_seed)
    scatter: list[UnitaryPairSummary] = []
    contained: list[bool] = []
    draws = 0
    batch = 8192
    while len(scatter) < scatter_samples:
        if draws >= _MAX_REJECTION_DRAWS:
            raise RuntimeError(
                f"rejection sampling exhausted after {draws} draws; "
                f"only {len(scatter)} of {scatter_samples} points accepted")
        draws += batch
        u_mats = _haar2_batch(rng, batch)
        v_mats = _haar2_batch(rng, batch)
        psis = rng.standard_normal((batch, 2)) + 1j * rng.standard_normal((batch, 2))
        psis /= np.linalg.norm(psis, axis=1, keepdims=True)
        u_psi = np.einsum("nij,nj->ni", u_mats, psis)
        v_psi = np.einsum("nij,nj->ni", v_mats, psis)
        ov = np.abs(np.einsum("ni,ni->n", u_psi.conj(), v_psi))
        for idx in np.flatnonzero(np.abs(ov - overlap) <= window):
            if len(scatter) >= scatter_samples:
                break
            summary = unitary_pair_summary(u_mats[idx], v_mats[idx],
                                           QuantumState.pure(psis[idx]))
            reports = unitary_uncertainty_checks(summary, tol=tol)
            scatter.append(summary)
            contained.append(all(r.verdict != "fail" for r in reports))
    return RegionDataset(overlap=overlap, phi=phi, curves=curves,
                         scatter=scatter, contained=contained)


def region_csv_text(dataset: RegionDataset) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["curve_id", "u", "v"])
    for curve in dataset.curves:
        for u, v in zip(curve.u, curve.v):
            writer.writerow([curve.curve_id, format(float(u), ".17g"),
                             format(float(v), ".17g")])
    for s in dataset.scatter:
        writer.writerow(["scatter", format(s.u, ".17g"), format(s.v, ".17g")])
    return buf.getvalue()


def write_region_csv(path, dataset: RegionDataset) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(region_csv_text(dataset))


def render_region_png(path, dataset: RegionDataset) -> None:
    """Render the curves and scatter to an image next to the CSV."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.2, 5.2))
    styles = {
        "unitary-ellipse": dict(color="purple", lw=2.0,
                                label="overlap ellipse"),
        "unitary-hyperbola": dict(color="red", lw=1.6,
                                  label="tangent hyperbola"),
        "unitary-phase-ellipse": dict(color="tab:blue", lw=1.6, ls="--",
                                      label="phase-corrected ellipse"),
    }
    for curve in dataset.curves:
        style = styles.get(curve.curve_id, dict(lw=1.0))
        ax.plot(curve.u, curve.v, **style)
    pts = dataset.scatter_points()
    if pts.size:
        ax.plot(pts[:, 0], pts[:, 1], ".", ms=2.5, color="0.35", alpha=0.5,
                label=f"random pairs (overlap {dataset.overlap:.2f} +/- 0.01)")
    ax.set_xlabel(r"$u = |\langle U\rangle|$")
    ax.set_ylabel(r"$v = |\langle V\rangle|$")
    ax.set_xlim(0.0, 1.1)
    ax.set_ylim(0.0, 1.1)
    ax.set_aspect("equal")
    ax.legend(loc="upper right", fontsize=8)
    ax.set_title(f"overlap {dataset.overlap:g}, phase {dataset.phi:g} rad")
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)


def parse_phase(text: str) -> float:
    """Parse a phase argument: a float, or multiples like 'pi', '-pi', 'pi/2'."""
    raw = str(text).strip().lower().replace(" ", "")
    try:
        return float(raw)
    except ValueError:
        pass
    import re

    match = re.fullmatch(r"([+-]?\d*\.?\d*)\*?pi(?:/(\d+\.?\d*))?", raw)
    if not match:
        raise ValueError(f"cannot parse phase {text!r}")
    coeff_text = match.group(1)
    if coeff_text in ("", "+"):
        coeff = 1.0
    elif coeff_text == "-":
        coeff = -1.0
    else:
        coeff = float(coeff_text)
    divisor = float(match.group(2)) if match.group(2) else 1.0
    return coeff * math.pi / divisor
