"""Static SVG figures for gap distributions, calibration and footprint savings."""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from yoked_sim.gapstore import CalibrationRow, SmoothedCurve  # noqa: E402
from yoked_sim.schemas.gaps import GapDistribution  # noqa: E402

plt.rcParams["svg.hashsalt"] = "yoked-sim"


def save_svg(fig: Figure, path: Path) -> Path:
    """Write without a creation date so reruns are byte-identical."""

    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_gaps(dist: GapDistribution, curve: SmoothedCurve | None, path: Path) -> Path:
    dbs, _, _ = dist.arrays()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(dbs, dist.probabilities(), width=1.0, color="tab:blue", alpha=0.5, label="binned")
    if curve is not None:
        ax.plot(curve.dbs, curve.mass, color="tab:red", label="smoothed")
    ax.set_yscale("log")
    ax.set_xlabel("signed complementary gap (dB)")
    ax.set_ylabel("probability")
    ax.set_title(f"d={dist.d}, {dist.base_rounds} rounds, {dist.noise_label}")
    ax.legend()
    fig.tight_layout()
    return save_svg(fig, path)


def plot_calibration(rows: Sequence[CalibrationRow], path: Path) -> Path:
    seen = [r for r in rows if r.failures > 0]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([r.magnitude for r in rows], [r.predicted for r in rows], label="calibrated")
    ax.plot(
        [r.magnitude for r in seen],
        [r.empirical for r in seen],
        marker="o",
        linestyle="none",
        label="observed",
    )
    ax.set_yscale("log")
    ax.set_xlabel("|gap| (dB)")
    ax.set_ylabel("failure rate")
    ax.legend()
    fig.tight_layout()
    return save_svg(fig, path)


def plot_savings(targets: Sequence[float], ratios: Sequence[float], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(np.asarray(targets), np.asarray(ratios), marker="o")
    ax.set_xscale("log")
    ax.invert_xaxis()
    ax.set_xlabel("target error per logical qubit per round")
    ax.set_ylabel("unyoked / yoked qubits per logical")
    fig.tight_layout()
    return save_svg(fig, path)
