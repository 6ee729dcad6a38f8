"""Scaling-law fits and physical-qubit footprint planning."""

from yoked_sim.planner.layout import (
    CSV_COLUMNS,
    LAYOUT_FAMILIES,
    block_logicals,
    candidate_shapes,
    estimate_footprint,
    optimize_layout,
    plan_row,
    savings_ratio,
    savings_table,
)
from yoked_sim.planner.scaling import DEFAULT_FITS, fit_power_law, fit_scaling, predict_rate

__all__ = [
    "CSV_COLUMNS",
    "DEFAULT_FITS",
    "LAYOUT_FAMILIES",
    "block_logicals",
    "candidate_shapes",
    "estimate_footprint",
    "fit_power_law",
    "fit_scaling",
    "optimize_layout",
    "plan_row",
    "predict_rate",
    "savings_ratio",
    "savings_table",
]
