"""Noise model parameters."""

from pydantic import BaseModel, ConfigDict, Field


class NoiseParams(BaseModel):
    """Single-parameter SI1000 circuit noise."""

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
        json_schema_extra={"example": {"p": 0.001}},
    )

    p: float = Field(
        ...,
        ge=0.0,
        le=0.1,
        description="Two-qubit gate error rate; every other SI1000 channel scales from it.",
    )

    @property
    def label(self) -> str:
        return f"si1000p{self.p:g}"
