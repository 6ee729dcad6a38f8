"""Exhaustive distance search for parity check codes."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, islice, product
from math import comb

import numpy as np
import numpy.typing as npt
import structlog

from yoked_sim.core.config import get_settings
from yoked_sim.errors import ParameterError, ResourceGuardError
from yoked_sim.qpcc.code import ParityCheckCode, PauliType, rank_k
from yoked_sim.qpcc.gf2 import nullspace, pack_columns, reduce_against

logger = structlog.get_logger(__name__)

_CHUNK = 1 << 18


class SearchPath(str, Enum):
    """How undetectable patterns are enumerated."""

    WEIGHT = "weight"
    KERNEL = "kernel"


@dataclass(frozen=True)
class CodeParameters:
    """Measured code parameters."""

    n: int
    k: int
    distance: int | None
    distance_cap: int
    search_path: SearchPath

    @property
    def distance_label(self) -> str:
        return str(self.distance) if self.distance is not None else f">={self.distance_cap}"

    def as_tuple(self) -> tuple[int, int, int | str]:
        return (self.n, self.k, self.distance if self.distance is not None else self.distance_label)


def _weight_cost(n: int, cap: int) -> int:
    return sum(comb(n, w) for w in range(1, cap + 1))


def _kernel_cost(code: ParityCheckCode) -> int:
    dims = [code.n - code.check_rank(t) for t in PauliType]
    return max(2**dim for dim in dims)


def choose_path(code: ParityCheckCode, distance_cap: int, budget: int | None = None) -> SearchPath:
    """Pick the cheaper enumeration, failing when both exceed the budget."""

    limit = budget if budget is not None else get_settings().enumeration_budget
    weight_cost = _weight_cost(code.n, distance_cap)
    kernel_cost = _kernel_cost(code)
    if min(weight_cost, kernel_cost) > limit:
        raise ResourceGuardError(
            f"distance search needs {min(weight_cost, kernel_cost)} patterns, budget is {limit}"
        )
    return SearchPath.KERNEL if kernel_cost < weight_cost else SearchPath.WEIGHT


def _nontrivial(
    code: ParityCheckCode,
    pauli_type: PauliType,
    patterns: npt.NDArray[np.uint8],
    strict: bool = True,
) -> npt.NDArray[np.bool_]:
    if not strict:
        return patterns.any(axis=1)
    reduced, pivots = code.echelon(pauli_type)
    return reduce_against(reduced, pivots, patterns).any(axis=1)


def _weight_search(
    code: ParityCheckCode, pauli_type: PauliType, distance_cap: int, strict: bool = True
) -> list[tuple[int, ...]]:
    """Enumerate supports by weight; return every nontrivial one of minimum weight."""

    columns = pack_columns(code.checks(pauli_type.opposite))
    n = code.n
    for weight in range(1, distance_cap + 1):
        found: list[tuple[int, ...]] = []
        combos = combinations(range(n), weight)
        while True:
            flat = np.fromiter(
                (q for combo in islice(combos, _CHUNK) for q in combo), dtype=np.int64
            )
            if flat.size == 0:
                break
            supports = flat.reshape(-1, weight)
            syndromes = np.bitwise_xor.reduce(columns[supports], axis=1)
            silent = supports[~syndromes.any(axis=1)]
            if silent.size:
                patterns = np.zeros((silent.shape[0], n), dtype=np.uint8)
                np.put_along_axis(patterns, silent, 1, axis=1)
                keep = _nontrivial(code, pauli_type, patterns, strict)
                found.extend(tuple(int(q) for q in row) for row in silent[keep])
        if found:
            return found
    return []


def _kernel_search(
    code: ParityCheckCode, pauli_type: PauliType, distance_cap: int, strict: bool = True
) -> list[tuple[int, ...]]:
    """Enumerate the kernel of the opposite-type checks; return minimum nontrivial supports."""

    basis = nullspace(code.checks(pauli_type.opposite))
    dim = basis.shape[0]
    best_weight: int | None = None
    best: list[tuple[int, ...]] = []
    for start in range(0, 2**dim, _CHUNK):
        stop = min(2**dim, start + _CHUNK)
        index = np.arange(start, stop, dtype=np.int64)
        coeffs = ((index[:, None] >> np.arange(dim)) & 1).astype(np.uint8)
        patterns = (coeffs.astype(np.int64) @ basis.astype(np.int64) % 2).astype(np.uint8)
        keep = _nontrivial(code, pauli_type, patterns, strict)
        weights = patterns.sum(axis=1)
        weights[~keep] = code.n + 1
        low = int(weights.min()) if weights.size else code.n + 1
        if low > code.n or (best_weight is not None and low > best_weight):
            continue
        if best_weight is None or low < best_weight:
            best_weight, best = low, []
        best.extend(tuple(int(q) for q in np.flatnonzero(row)) for row in patterns[weights == low])
    if best_weight is None or best_weight > distance_cap:
        return []
    return sorted(set(best))


def minimum_weight_patterns(
    code: ParityCheckCode,
    pauli_type: PauliType,
    distance_cap: int,
    path: SearchPath | None = None,
    *,
    strict: bool = True,
) -> list[tuple[int, ...]]:
    """Supports of the lightest undetectable nontrivial patterns of one type, up to the cap.

    With `strict=False` stabilizers count too; that is the distance convention for k = 0.
    """

    if distance_cap < 1:
        raise ParameterError("distance_cap must be >= 1")
    chosen = path or choose_path(code, distance_cap)
    if chosen is SearchPath.KERNEL:
        return _kernel_search(code, pauli_type, distance_cap, strict)
    return sorted(_weight_search(code, pauli_type, distance_cap, strict))


def code_parameters(
    code: ParityCheckCode,
    distance_cap: int,
    *,
    path: SearchPath | None = None,
    budget: int | None = None,
) -> CodeParameters:
    """Measure (n, k, d) with k from GF(2) ranks and d by exhaustive search up to the cap."""

    if distance_cap < 1:
        raise ParameterError("distance_cap must be >= 1")
    chosen = path or choose_path(code, distance_cap, budget)
    k = rank_k(code)
    weights: list[int] = []
    for pauli_type in PauliType:
        patterns = minimum_weight_patterns(code, pauli_type, distance_cap, chosen, strict=k > 0)
        if patterns:
            weights.append(len(patterns[0]))
    distance = min(weights) if weights else None
    logger.info(
        "qpcc.parameters",
        sides=code.side_lengths,
        k=k,
        distance=distance,
        path=chosen.value,
    )
    return CodeParameters(
        n=code.n,
        k=k,
        distance=distance,
        distance_cap=distance_cap,
        search_path=chosen,
    )


def is_rectangle(positions: tuple[int, ...] | list[int], shape: tuple[int, ...]) -> bool:
    """True iff the positions are the 2**r corners of an r-dimensional combinatorial rectangle."""

    coords = {tuple(int(c) for c in np.unravel_index(q, shape)) for q in positions}
    if len(coords) != 2 ** len(shape) or len(coords) != len(positions):
        return False
    per_axis = [sorted({c[axis] for c in coords}) for axis in range(len(shape))]
    if any(len(values) != 2 for values in per_axis):
        return False
    return coords == set(product(*per_axis))
