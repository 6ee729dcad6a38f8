"""Run manifests and pipeline validation settings."""

from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from yoked_sim.schemas.outer import FailureStats


class RunManifest(BaseModel):
    """Everything needed to reproduce the data files of one CLI run."""

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "command": "code build",
                "params": {"sides": [8, 8]},
                "seed": 0,
                "version": "0.1.0",
                "inputs": {},
                "wall_seconds": 0.02,
                "outputs": ["code.json"],
            }
        },
    )

    command: str = Field(..., description="Subcommand path, e.g. 'gaps collect'.")
    params: Dict[str, Any] = Field(default_factory=dict, description="Resolved parameters.")
    seed: int = Field(..., ge=0, description="Root seed of every random stream.")
    version: str = Field(..., description="Toolkit version that produced the run.")
    inputs: Dict[str, str] = Field(
        default_factory=dict, description="SHA-256 digest of every input file by path."
    )
    wall_seconds: float = Field(0.0, ge=0.0, description="Elapsed wall-clock time.")
    outputs: List[str] = Field(default_factory=list, description="Files written by the run.")


class ValidationConfig(BaseModel):
    """Matched parameters for the gap-versus-full comparison."""

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {"d": 3, "shape": [8], "inner_rounds": 30, "p": 0.001, "shots": 20000}
        },
    )

    d: int = Field(..., ge=3, description="Inner code distance.")
    shape: Tuple[int, ...] = Field(..., min_length=1, max_length=2, description="Block sides.")
    inner_rounds: int = Field(..., ge=1, description="Inner rounds before the yoke round.")
    p: float = Field(..., ge=0.0, le=0.1, description="SI1000 noise strength.")
    shots: int = Field(..., ge=1, description="Shots for each simulation.")
    gap_shots: Optional[int] = Field(
        None, ge=1, description="Memory shots for gap collection; defaults to shots."
    )
    ratio_bound: float = Field(2.0, ge=1.0, description="Allowed rate ratio either way.")
    seed: int = Field(0, ge=0, description="Root seed.")


class ValidationReport(BaseModel):
    """Outcome of a gap-versus-full comparison."""

    model_config = ConfigDict(extra="forbid")

    config: ValidationConfig = Field(..., description="Parameters that were compared.")
    full: FailureStats = Field(..., description="Circuit-level single-round result.")
    gap: FailureStats = Field(..., description="Gap-sampling result on the same parameters.")
    ratio: float = Field(..., ge=0.0, description="Larger rate over smaller rate.")
    passed: bool = Field(..., description="Whether the ratio is within the bound.")
