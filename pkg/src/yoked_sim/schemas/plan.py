"""Scaling fits, cost rules and storage layout plans."""

from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field


class StorageMode(str, Enum):
    """Whether stored logical qubits are immediately accessible."""

    COLD = "cold"
    HOT = "hot"


class ScalingFit(BaseModel):
    """rate = r_o * r_i**e_r * n**e_n * lam**-d * prefactor, exponents fixed by dimension."""

    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
        json_schema_extra={"example": {"dimension": 1, "lam": 8.0, "prefactor": 0.002}},
    )

    dimension: int = Field(..., ge=0, le=2, description="0 unyoked, 1 or 2 yoked.")
    lam: float = Field(..., gt=1.0, description="Error suppression base per unit distance.")
    prefactor: float = Field(..., gt=0.0, description="Multiplicative constant A.")

    @property
    def exponents(self) -> Tuple[int, int]:
        return {0: (1, 1), 1: (2, 2), 2: (4, 2)}[self.dimension]


class CostModel(BaseModel):
    """Cycle-length, workspace and search-range rules for layout estimates."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    cold_1d_cycle_per_block: int = Field(8, ge=1, description="1D cold cycle, d-units per block.")
    cold_1d_cycle_offset: int = Field(2, ge=0, description="1D cold cycle fixed d-units.")
    cold_2d_cycle_per_width: int = Field(25, ge=1, description="2D cycle, d-units per width.")
    cold_2d_cycle_offset: int = Field(4, ge=0, description="2D cycle fixed d-units.")
    hot_1d_cycle: int = Field(50, ge=1, description="1D hot cycle in d-units.")
    hot_hallway_utilization: float = Field(
        0.4, gt=0.0, le=1.0, description="Hallway duty cycle; does not change footprint."
    )
    max_logical: int = Field(250, ge=1, description="Largest logical count considered.")
    min_distance: int = Field(3, ge=3, description="Smallest odd distance searched.")
    max_distance: int = Field(45, ge=3, description="Largest odd distance searched.")
    max_1d_side: int = Field(252, ge=4, description="Largest 1D block searched.")
    widths_2d: Tuple[int, ...] = Field((4, 8, 12, 16), description="2D block widths searched.")
    allow_rectangular_2d: bool = Field(
        False, description="Also search w1 x w2 blocks with unequal sides."
    )

    @staticmethod
    def patch_qubits(d: int) -> int:
        return 2 * (d + 1) ** 2


class LayoutPlan(BaseModel):
    """One storage layout and its predicted per-logical-per-round error rate."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    dimension: int = Field(..., ge=0, le=2, description="0 unyoked, 1 or 2 yoked.")
    mode: StorageMode = Field(..., description="Cold or hot storage.")
    d: int = Field(..., ge=1, description="Inner code distance.")
    shape: Tuple[int, ...] = Field(..., description="Block side lengths; (1,) when unyoked.")
    blocks: int = Field(..., ge=1, description="Number of blocks m_b.")
    cycle_rounds: int = Field(..., ge=1, description="Inner rounds per yoke cycle.")
    patches: int = Field(..., ge=1, description="Storage plus workspace patches.")
    physical_qubits: int = Field(..., gt=0, description="patches * 2(d+1)^2.")
    logical_qubits: int = Field(..., ge=1, description="Stored logical qubits.")
    predicted_rate: float = Field(..., ge=0.0, description="Error per logical per round.")

    @property
    def qubits_per_logical(self) -> float:
        return self.physical_qubits / self.logical_qubits
