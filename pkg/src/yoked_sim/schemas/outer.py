"""Outer-code simulation configuration and failure statistics."""

from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class SimConfig(BaseModel):
    """Parameters of a gap-sampling simulation of one yoked block."""

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
        json_schema_extra={
            "example": {
                "d": 3,
                "inner_rounds": 30,
                "outer_rounds": 10,
                "shape": [4, 4],
                "seed": 7,
                "shots": 1000,
            }
        },
    )

    d: int = Field(..., ge=1, description="Inner surface-code distance.")
    inner_rounds: int = Field(..., ge=1, description="Inner rounds between yoke checks.")
    outer_rounds: int = Field(10, ge=1, description="Yoke check rounds per shot.")
    shape: Tuple[int, ...] = Field(..., min_length=1, description="Block side lengths.")
    timelike_rounds: Optional[int] = Field(
        None,
        ge=1,
        description="Inner rounds equivalent to one yoke measurement; defaults to 100*d.",
    )
    seed: int = Field(0, ge=0, description="Root seed of the shot streams.")
    shots: int = Field(1000, ge=1, description="Number of simulated shots.")

    @field_validator("shape")
    @classmethod
    def _positive_sides(cls, shape: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(side < 1 for side in shape):
            raise ValueError("block side lengths must be positive")
        return shape

    @property
    def dimension(self) -> int:
        return len(self.shape)

    @property
    def patches(self) -> int:
        count = 1
        for side in self.shape:
            count *= side
        return count

    @property
    def effective_timelike_rounds(self) -> int:
        return self.timelike_rounds if self.timelike_rounds is not None else 100 * self.d


class FailureStats(BaseModel):
    """Logical failure counts and the per-patch-round rate of a simulation."""

    model_config = ConfigDict(extra="forbid")

    shots: int = Field(..., ge=0, description="Simulated shots.")
    failures_x: int = Field(..., ge=0, description="Shots failing on the X-type residual.")
    failures_z: int = Field(..., ge=0, description="Shots failing on the Z-type residual.")
    failures_any: int = Field(..., ge=0, description="Shots failing on either residual.")
    patches: int = Field(..., ge=1, description="Surface-code patches per block.")
    inner_rounds_total: int = Field(..., ge=1, description="Inner rounds covered per shot.")
    rate: float = Field(..., ge=0.0, description="Logical error per patch-round.")
    ci_low: float = Field(..., ge=0.0, description="Lower 95% Wilson bound on the rate.")
    ci_high: float = Field(..., ge=0.0, description="Upper 95% Wilson bound on the rate.")
    wall_seconds: float = Field(0.0, ge=0.0, description="Elapsed wall-clock time.")
    config: Dict[str, Any] = Field(default_factory=dict, description="Run parameters.")

    @model_validator(mode="after")
    def _failures_within_shots(self) -> "FailureStats":
        for name in ("failures_x", "failures_z", "failures_any"):
            if getattr(self, name) > self.shots:
                raise ValueError(f"{name} exceeds shots")
        return self
