"""Physical-qubit footprints of storage layouts and the search for the cheapest one."""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from itertools import product
from math import prod

import structlog

from yoked_sim.errors import InfeasiblePlanError, ParameterError, UnsupportedDimensionError
from yoked_sim.planner.scaling import DEFAULT_FITS, predict_rate
from yoked_sim.qpcc import validate_sides
from yoked_sim.schemas.plan import CostModel, LayoutPlan, ScalingFit, StorageMode

logger = structlog.get_logger(__name__)

CSV_COLUMNS = (
    "target",
    "dimension",
    "mode",
    "d",
    "block",
    "m_b",
    "patches",
    "phys_qubits",
    "logicals",
    "qubits_per_logical",
    "predicted_rate",
)


def block_logicals(shape: tuple[int, ...]) -> int:
    return 2 * prod(s - 1 for s in shape) - prod(shape)


def _cycle_and_patches(
    dimension: int,
    mode: StorageMode,
    d: int,
    shape: tuple[int, ...],
    blocks: int,
    cost: CostModel,
) -> tuple[int, int]:
    n = prod(shape)
    if dimension == 0:
        return d, blocks * (2 if mode is StorageMode.HOT else 1)
    if dimension == 1:
        if mode is StorageMode.HOT:
            # one hallway row of n patches beside every block
            return cost.hot_1d_cycle * d, 2 * blocks * n
        cycle = d * (cost.cold_1d_cycle_per_block * blocks + cost.cold_1d_cycle_offset)
        return cycle, blocks * n + n
    if mode is StorageMode.HOT:
        raise UnsupportedDimensionError("hot storage is modelled for 1D blocks only")
    rows, cols = shape
    cycle = d * (cost.cold_2d_cycle_per_width * max(rows, cols) + cost.cold_2d_cycle_offset)
    return cycle, blocks * (n + rows + cols + 1)


def estimate_footprint(
    dimension: int,
    mode: StorageMode | str,
    d: int,
    shape: tuple[int, ...] | Sequence[int],
    blocks: int,
    cost: CostModel | None = None,
    fits: dict[int, ScalingFit] | None = None,
) -> LayoutPlan:
    """Patches, qubits and predicted error per logical per round of one layout.

    Unyoked layouts (dimension 0) use `blocks` as the number of stored logical qubits.
    `predicted_rate` sums the per-block rate over all blocks before dividing by the
    cycle length and the logical count: blocks * block_rate / (cycle_rounds * logicals).
    """

    cost = cost or CostModel()
    fits = fits or DEFAULT_FITS
    mode = StorageMode(mode)
    shape = tuple(int(s) for s in shape) if dimension else (1,)
    if dimension not in (0, 1, 2):
        raise UnsupportedDimensionError(f"dimension must be 0, 1 or 2, got {dimension}")
    if d < 1 or blocks < 1:
        raise ParameterError("d and blocks must be positive")
    if dimension:
        if len(shape) != dimension:
            raise ParameterError(f"{dimension}D layouts need {dimension} side lengths")
        validate_sides(shape)
    per_block = block_logicals(shape) if dimension else 1
    if per_block < 1:
        raise ParameterError(f"block {shape} encodes no logical qubits")

    cycle, patches = _cycle_and_patches(dimension, mode, d, shape, blocks, cost)
    logical = blocks * per_block
    block_rate = predict_rate(fits[dimension], d, cycle, 1, prod(shape))
    return LayoutPlan(
        dimension=dimension,
        mode=mode,
        d=d,
        shape=shape,
        blocks=blocks,
        cycle_rounds=cycle,
        patches=patches,
        physical_qubits=patches * cost.patch_qubits(d),
        logical_qubits=logical,
        predicted_rate=blocks * block_rate / (cycle * logical),
    )


def candidate_shapes(dimension: int, cost: CostModel) -> Iterator[tuple[int, ...]]:
    if dimension == 0:
        yield (1,)
    elif dimension == 1:
        yield from ((n,) for n in range(4, cost.max_1d_side + 1, 2))
    elif cost.allow_rectangular_2d:
        yield from product(cost.widths_2d, repeat=2)
    else:
        yield from ((w, w) for w in cost.widths_2d)


def optimize_layout(
    target: float,
    dimension: int,
    mode: StorageMode | str = StorageMode.COLD,
    fits: dict[int, ScalingFit] | None = None,
    cost: CostModel | None = None,
) -> LayoutPlan:
    """Fewest physical qubits per logical qubit meeting `target`; ties go to smaller d."""

    if not 0.0 < target < 1.0:
        raise ParameterError(f"target must lie in (0, 1), got {target}")
    cost = cost or CostModel()
    fits = fits or DEFAULT_FITS
    mode = StorageMode(mode)

    best: LayoutPlan | None = None
    for d in range(cost.min_distance | 1, cost.max_distance + 1, 2):
        for shape in candidate_shapes(dimension, cost):
            per_block = block_logicals(shape) if dimension else 1
            if per_block < 1:
                continue
            for blocks in range(1, cost.max_logical // per_block + 1):
                plan = estimate_footprint(dimension, mode, d, shape, blocks, cost, fits)
                if plan.predicted_rate > target:
                    continue
                if best is None or (plan.qubits_per_logical, plan.d, plan.patches) < (
                    best.qubits_per_logical,
                    best.d,
                    best.patches,
                ):
                    best = plan
                if dimension == 0:
                    break
    if best is None:
        raise InfeasiblePlanError(
            f"no {mode.value} {dimension}D layout reaches {target:g} "
            f"within d <= {cost.max_distance}"
        )
    logger.info(
        "planner.optimized",
        target=target,
        dimension=dimension,
        mode=mode.value,
        d=best.d,
        shape=list(best.shape),
        qubits_per_logical=best.qubits_per_logical,
    )
    return best


def plan_row(target: float, plan: LayoutPlan) -> dict[str, str | int]:
    """CSV row of a plan; floats as 12-significant-digit strings."""

    return {
        "target": f"{target:.12g}",
        "dimension": plan.dimension,
        "mode": plan.mode.value,
        "d": plan.d,
        "block": "x".join(str(s) for s in plan.shape),
        "m_b": plan.blocks,
        "patches": plan.patches,
        "phys_qubits": plan.physical_qubits,
        "logicals": plan.logical_qubits,
        "qubits_per_logical": f"{plan.qubits_per_logical:.12g}",
        "predicted_rate": f"{plan.predicted_rate:.12g}",
    }


LAYOUT_FAMILIES: tuple[tuple[int, StorageMode], ...] = (
    (0, StorageMode.COLD),
    (0, StorageMode.HOT),
    (1, StorageMode.COLD),
    (1, StorageMode.HOT),
    (2, StorageMode.COLD),
)


def savings_table(
    targets: Sequence[float],
    fits: dict[int, ScalingFit] | None = None,
    cost: CostModel | None = None,
) -> list[dict[str, str | int]]:
    """Optimal plan of every layout family at every target; infeasible families are skipped."""

    rows = []
    for target in targets:
        for dimension, mode in LAYOUT_FAMILIES:
            try:
                plan = optimize_layout(target, dimension, mode, fits, cost)
            except InfeasiblePlanError:
                logger.warning("planner.infeasible", target=target, dimension=dimension)
                continue
            rows.append(plan_row(target, plan))
    return rows


def savings_ratio(
    target: float,
    dimension: int = 2,
    mode: StorageMode | str = StorageMode.COLD,
    fits: dict[int, ScalingFit] | None = None,
    cost: CostModel | None = None,
) -> float:
    """Unyoked qubits per logical over yoked qubits per logical in the same storage mode."""

    unyoked = optimize_layout(target, 0, mode, fits, cost)
    yoked = optimize_layout(target, dimension, mode, fits, cost)
    return unyoked.qubits_per_logical / yoked.qubits_per_logical
