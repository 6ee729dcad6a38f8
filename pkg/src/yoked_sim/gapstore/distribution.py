"""Building, smoothing and extrapolating gap distributions."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import structlog

from yoked_sim.errors import EmptyInputError, ParameterError
from yoked_sim.gapstore.calibration import failure_probability
from yoked_sim.schemas.gaps import CalibrationModel, GapBin, GapDistribution

logger = structlog.get_logger(__name__)


def signed_bin(gap: float, failed: bool) -> int:
    """Nearest integer dB of |gap|, negative when the sample failed."""

    magnitude = int(np.floor(abs(gap) + 0.5))
    return -magnitude if failed else magnitude


def build_distribution(
    samples: Iterable[tuple[float, bool | int]],
    base_rounds: int,
    d: int,
    *,
    noise_label: str = "unknown",
) -> GapDistribution:
    counts: Counter[int] = Counter()
    failures: Counter[int] = Counter()
    for gap, failed in samples:
        key = signed_bin(gap, bool(failed))
        counts[key] += 1
        if failed:
            failures[key] += 1
    if not counts:
        raise EmptyInputError("cannot build a gap distribution from zero samples")
    bins = [GapBin(db=k, count=counts[k], failures=failures[k]) for k in sorted(counts)]
    return GapDistribution(
        base_rounds=base_rounds,
        d=d,
        noise_label=noise_label,
        bins=bins,
        total=float(sum(counts.values())),
    )


@dataclass(frozen=True)
class SmoothedCurve:
    """Probability mass on a contiguous integer-dB lattice."""

    dbs: npt.NDArray[np.int64]
    mass: npt.NDArray[np.float64]

    @property
    def total(self) -> float:
        return float(self.mass.sum())

    def as_pairs(self) -> list[tuple[int, float]]:
        return [(int(d), float(m)) for d, m in zip(self.dbs, self.mass, strict=True)]


def cosine_window(halfwidth: int) -> npt.NDArray[np.float64]:
    offsets = np.arange(-halfwidth, halfwidth + 1)
    kernel = 0.5 * (1.0 + np.cos(np.pi * offsets / (halfwidth + 1)))
    return kernel / kernel.sum()


def smooth(dist: GapDistribution, window_halfwidth: int) -> SmoothedCurve:
    """Convolve the normalised histogram with a raised cosine, keeping its area."""

    if window_halfwidth < 1:
        raise ParameterError("window_halfwidth must be at least 1")
    dbs, _, _ = dist.arrays()
    probabilities = dist.probabilities()
    lattice = np.arange(dbs[0], dbs[-1] + 1)
    dense = np.zeros(lattice.size)
    dense[dbs - dbs[0]] = probabilities
    smoothed = np.convolve(dense, cosine_window(window_halfwidth), mode="full")
    smoothed *= probabilities.sum() / smoothed.sum()
    grid = np.arange(dbs[0] - window_halfwidth, dbs[-1] + window_halfwidth + 1)
    return SmoothedCurve(dbs=grid, mass=smoothed)


def extrapolate_min_of_m(
    dist: GapDistribution, m: float, model: CalibrationModel | None = None
) -> GapDistribution:
    """Distribution of the minimum of m independent draws.

    Works on survival functions, S_out = S_in^m, so far tails keep their precision.
    Failure mass of every output bin comes from the calibration model.
    """

    if m <= 0:
        raise ParameterError(f"m must be positive, got {m}")
    if m == 1:
        return dist
    model = model or CalibrationModel()
    dbs, _, _ = dist.arrays()
    probabilities = dist.probabilities()
    # survival at and after each bin: P(G >= g_i) and P(G > g_i)
    at_or_above = np.cumsum(probabilities[::-1])[::-1]
    above = np.append(at_or_above[1:], 0.0)
    mass = np.power(np.minimum(at_or_above, 1.0), m) - np.power(above, m)
    mass = np.clip(mass, 0.0, None) * dist.total
    failures = mass * np.asarray(failure_probability(model, np.abs(dbs)))
    keep = mass > 0
    bins = [
        GapBin(db=int(k), count=float(c), failures=float(min(f, c)))
        for k, c, f in zip(dbs[keep], mass[keep], failures[keep], strict=True)
    ]
    total = float(sum(b.count for b in bins))
    logger.debug("gapstore.extrapolated", m=m, bins=len(bins), d=dist.d)
    return dist.model_copy(
        update={
            "bins": bins,
            "total": total,
            "extrapolated_m": dist.extrapolated_m * m,
            "smoothed": None,
        }
    )


def ks_distance(a: GapDistribution, b: GapDistribution) -> float:
    """Largest CDF difference on the union of both lattices."""

    keys_a, _, _ = a.arrays()
    keys_b, _, _ = b.arrays()
    lattice = np.union1d(keys_a, keys_b)

    def cdf_on(keys: npt.NDArray[np.int64], cdf: npt.NDArray[np.float64]) -> npt.NDArray:
        index = np.searchsorted(keys, lattice, side="right") - 1
        return np.where(index >= 0, cdf[np.clip(index, 0, None)], 0.0)

    return float(np.max(np.abs(cdf_on(keys_a, a.cdf()) - cdf_on(keys_b, b.cdf()))))
