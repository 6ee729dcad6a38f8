"""Failure-rate accounting shared by the outer simulations."""

from __future__ import annotations

from typing import Any

from scipy.stats import binomtest

from yoked_sim.schemas.outer import FailureStats


def wilson_interval(failures: int, shots: int, confidence: float = 0.95) -> tuple[float, float]:
    if shots == 0:
        return 0.0, 1.0
    ci = binomtest(failures, shots).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def failure_stats(
    *,
    shots: int,
    failures_x: int,
    failures_z: int,
    failures_any: int,
    patches: int,
    inner_rounds_total: int,
    wall_seconds: float = 0.0,
    config: dict[str, Any] | None = None,
) -> FailureStats:
    """Per-shot Wilson interval scaled down to one patch for one inner round."""

    scale = patches * inner_rounds_total
    low, high = wilson_interval(failures_any, shots)
    return FailureStats(
        shots=shots,
        failures_x=failures_x,
        failures_z=failures_z,
        failures_any=failures_any,
        patches=patches,
        inner_rounds_total=inner_rounds_total,
        rate=failures_any / shots / scale if shots else 0.0,
        ci_low=low / scale,
        ci_high=high / scale,
        wall_seconds=wall_seconds,
        config=config or {},
    )
