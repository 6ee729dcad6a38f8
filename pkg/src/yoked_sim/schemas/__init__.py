"""Pydantic schemas shared across the toolkit."""

from yoked_sim.schemas.gaps import CalibrationModel, GapBin, GapDistribution
from yoked_sim.schemas.noise import NoiseParams
from yoked_sim.schemas.outer import FailureStats, SimConfig
from yoked_sim.schemas.plan import CostModel, LayoutPlan, ScalingFit, StorageMode
from yoked_sim.schemas.run import RunManifest, ValidationConfig, ValidationReport

__all__ = [
    "CalibrationModel",
    "CostModel",
    "FailureStats",
    "GapBin",
    "GapDistribution",
    "LayoutPlan",
    "NoiseParams",
    "RunManifest",
    "ScalingFit",
    "SimConfig",
    "StorageMode",
    "ValidationConfig",
    "ValidationReport",
]
