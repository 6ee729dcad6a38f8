"""Complementary-gap histograms and the gap-to-failure calibration."""

from typing import List, Optional, Tuple

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, model_validator

_MASS_TOLERANCE = 1e-9


class GapBin(BaseModel):
    """Mass at one signed integer-dB lattice point; negative keys hold failed samples."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    db: int = Field(..., description="Signed gap in whole decibels.")
    count: float = Field(..., ge=0.0, description="Sample count or extrapolated mass.")
    failures: float = Field(..., ge=0.0, description="Failed samples within the bin.")

    @model_validator(mode="after")
    def _failures_within_count(self) -> "GapBin":
        if self.failures > self.count * (1 + _MASS_TOLERANCE) + _MASS_TOLERANCE:
            raise ValueError(f"bin {self.db}: failures {self.failures} exceed count {self.count}")
        return self


class CalibrationModel(BaseModel):
    """Maps a gap g (dB) to the failure likelihood 1/(1+10^(rescale*g/10))."""

    model_config = ConfigDict(
        extra="forbid", frozen=True, json_schema_extra={"example": {"rescale": 0.9}}
    )

    rescale: float = Field(0.9, gt=0.0, description="Multiplier applied to the dB gap.")


class GapDistribution(BaseModel):
    """Signed-dB histogram of complementary gaps from memory experiments."""

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
        json_schema_extra={
            "example": {
                "base_rounds": 30,
                "d": 3,
                "noise_label": "si1000p0.001",
                "bins": [
                    {"db": -2, "count": 3, "failures": 3},
                    {"db": 14, "count": 97, "failures": 0},
                ],
                "total": 100,
            }
        },
    )

    base_rounds: int = Field(..., ge=1, description="Rounds each sample was collected over.")
    d: int = Field(..., ge=1, description="Patch code distance.")
    noise_label: str = Field("unknown", description="Noise model the samples came from.")
    bins: List[GapBin] = Field(..., min_length=1, description="Bins sorted by signed dB.")
    total: float = Field(..., gt=0.0, description="Sum of bin counts.")
    extrapolated_m: float = Field(
        1.0, gt=0.0, description="Accumulated min-of-m factor applied since collection."
    )
    smoothed: Optional[List[Tuple[int, float]]] = Field(
        None, description="Optional smoothed probability curve as (dB, mass) pairs."
    )

    @model_validator(mode="after")
    def _check_bins(self) -> "GapDistribution":
        keys = [b.db for b in self.bins]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ValueError("bins must be strictly increasing in db")
        mass = sum(b.count for b in self.bins)
        if abs(mass - self.total) > _MASS_TOLERANCE * max(1.0, self.total):
            raise ValueError(f"total {self.total} differs from bin mass {mass}")
        return self

    def arrays(
        self,
    ) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.float64], npt.NDArray[np.float64]]:
        """(db, count, failures) as parallel arrays."""

        return (
            np.array([b.db for b in self.bins], dtype=np.int64),
            np.array([b.count for b in self.bins], dtype=np.float64),
            np.array([b.failures for b in self.bins], dtype=np.float64),
        )

    def probabilities(self) -> npt.NDArray[np.float64]:
        _, counts, _ = self.arrays()
        return counts / counts.sum()

    def cdf(self) -> npt.NDArray[np.float64]:
        """P(G <= db) at each bin, ascending signed axis."""

        return np.cumsum(self.probabilities())

    @property
    def failure_rate(self) -> float:
        _, counts, failures = self.arrays()
        return float(failures.sum() / counts.sum())
