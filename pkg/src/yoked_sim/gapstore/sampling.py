"""Drawing edge gaps and error bits from a gap distribution."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from yoked_sim.core.config import get_settings
from yoked_sim.gapstore.calibration import failure_probability, fold_bins
from yoked_sim.schemas.gaps import CalibrationModel, GapDistribution


class GapSampler:
    """Vectorised sampler over |gap| bins.

    Each bin's error probability is its empirical failure rate once the bin holds
    enough samples and at least one failure, otherwise the calibrated rate.
    """

    def __init__(
        self,
        dist: GapDistribution,
        model: CalibrationModel | None = None,
        *,
        empirical_min_samples: int | None = None,
    ) -> None:
        model = model or CalibrationModel()
        if empirical_min_samples is None:
            empirical_min_samples = get_settings().empirical_min_samples
        magnitudes, counts, failures = fold_bins(dist)
        predicted = np.atleast_1d(failure_probability(model, magnitudes))
        use_empirical = (counts >= empirical_min_samples) & (failures >= 1)
        with np.errstate(invalid="ignore", divide="ignore"):
            empirical = np.where(counts > 0, failures / counts, 0.0)
        self.magnitudes = magnitudes.astype(np.float64)
        self.p_fail = np.where(use_empirical, empirical, predicted)
        self.probabilities = counts / counts.sum()
        self._cdf = np.cumsum(self.probabilities)
        self._cdf[-1] = 1.0

    @property
    def expected_failure_rate(self) -> float:
        return float(np.dot(self.probabilities, self.p_fail))

    def draw(
        self, rng: np.random.Generator, size: int | tuple[int, ...]
    ) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.bool_]]:
        """Gap magnitudes (dB) and error bits, one pair of uniforms per draw."""

        index = np.searchsorted(self._cdf, rng.random(size), side="right")
        index = np.minimum(index, self._cdf.size - 1)
        errored = rng.random(size) < self.p_fail[index]
        return self.magnitudes[index], errored


def sample_signed_gap(
    dist: GapDistribution, model: CalibrationModel, rng: np.random.Generator
) -> tuple[float, bool]:
    gaps, errored = GapSampler(dist, model).draw(rng, 1)
    return float(gaps[0]), bool(errored[0])
