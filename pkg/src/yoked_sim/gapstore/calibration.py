"""Gap-to-failure calibration."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.special import expit

from yoked_sim.schemas.gaps import CalibrationModel, GapDistribution

_LN10_OVER_10 = math.log(10.0) / 10.0


def failure_probability(
    model: CalibrationModel, gap: float | npt.ArrayLike
) -> float | npt.NDArray[np.float64]:
    """1/(1+10^(rescale*g/10)); scalar in, scalar out."""

    values = expit(-model.rescale * _LN10_OVER_10 * np.asarray(gap, dtype=np.float64))
    if np.ndim(values) == 0:
        return float(values)
    return values


@dataclass(frozen=True)
class CalibrationRow:
    magnitude: int
    samples: float
    failures: float
    predicted: float

    @property
    def empirical(self) -> float:
        return self.failures / self.samples if self.samples else float("nan")


def fold_bins(
    dist: GapDistribution,
) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Merge +g and -g bins into |g| bins: (magnitudes, counts, failures)."""

    dbs, counts, failures = dist.arrays()
    magnitudes, inverse = np.unique(np.abs(dbs), return_inverse=True)
    folded_counts = np.bincount(inverse, weights=counts, minlength=magnitudes.size)
    folded_failures = np.bincount(inverse, weights=failures, minlength=magnitudes.size)
    return magnitudes, folded_counts, folded_failures


def calibration_table(
    dist: GapDistribution, model: CalibrationModel | None = None
) -> list[CalibrationRow]:
    """Empirical failure rate per |gap| bin next to the calibrated prediction."""

    model = model or CalibrationModel()
    magnitudes, counts, failures = fold_bins(dist)
    predicted = np.atleast_1d(failure_probability(model, magnitudes))
    return [
        CalibrationRow(int(m), float(c), float(f), float(p))
        for m, c, f, p in zip(magnitudes, counts, failures, predicted, strict=True)
    ]
