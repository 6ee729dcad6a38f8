"""Quantum parity check code construction in any dimension."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import prod

import numpy as np
import numpy.typing as npt
import structlog

from yoked_sim.errors import DimensionError, DivisibilityError, LengthMismatchError
from yoked_sim.qpcc.gf2 import BitMatrix, rank, reduce_against, row_reduce

logger = structlog.get_logger(__name__)


class PauliType(str, Enum):
    """Pauli type of a check or error pattern."""

    X = "X"
    Z = "Z"

    @property
    def opposite(self) -> PauliType:
        return PauliType.Z if self is PauliType.X else PauliType.X


def _frozen(array: npt.ArrayLike, dtype: type = np.uint8) -> npt.NDArray[np.generic]:
    out = np.array(array, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PatchPermutation:
    """Bijection between nominal array positions and Z-check positions."""

    forward: npt.NDArray[np.int64]
    inverse: npt.NDArray[np.int64]

    @classmethod
    def identity(cls, n: int) -> PatchPermutation:
        ident = _frozen(np.arange(n), np.int64)
        return cls(forward=ident, inverse=ident)

    def apply(self, positions: npt.ArrayLike) -> npt.NDArray[np.int64]:
        return np.asarray(self.forward)[np.asarray(positions, dtype=np.int64)]


@dataclass(frozen=True)
class ParityCheckCode:
    """Outer CSS code from delta-tensor parity checks, Z checks permuted."""

    side_lengths: tuple[int, ...]
    x_checks: BitMatrix
    z_checks: BitMatrix
    permutation: PatchPermutation
    _echelon: dict[PauliType, tuple[BitMatrix, list[int]]] = field(
        default_factory=dict, repr=False, compare=False
    )

    @property
    def dimension(self) -> int:
        return len(self.side_lengths)

    @property
    def n(self) -> int:
        return prod(self.side_lengths)

    @property
    def k(self) -> int:
        return 2 * prod(s - 1 for s in self.side_lengths) - self.n

    @property
    def d(self) -> int:
        return 2**self.dimension

    @property
    def rate(self) -> float:
        return self.k / self.n

    def checks(self, pauli_type: PauliType) -> BitMatrix:
        return self.x_checks if pauli_type is PauliType.X else self.z_checks

    def echelon(self, pauli_type: PauliType) -> tuple[BitMatrix, list[int]]:
        """Row-reduced check matrix of one type, computed once."""

        if pauli_type not in self._echelon:
            self._echelon[pauli_type] = row_reduce(self.checks(pauli_type))
        return self._echelon[pauli_type]

    def check_rank(self, pauli_type: PauliType) -> int:
        return len(self.echelon(pauli_type)[1])

    def coordinates(self, qubit: int) -> tuple[int, ...]:
        return tuple(int(c) for c in np.unravel_index(qubit, self.side_lengths))


def validate_sides(side_lengths: tuple[int, ...]) -> None:
    r = len(side_lengths)
    if r == 0:
        raise DimensionError("at least one side length is required")
    block = 2**r
    for side in side_lengths:
        if side < block:
            raise DimensionError(f"side length {side} is smaller than 2**{r}={block}")
        if side % block:
            raise DivisibilityError(f"side length {side} is not divisible by 2**{r}={block}")


def delta_checks(side_lengths: tuple[int, ...]) -> BitMatrix:
    """Row checks of the delta tensor: one check per axis and per fixing of the other axes.

    Checks free along axis 0 come first (column checks in 2D), then axis 1, and so on.
    """

    n = prod(side_lengths)
    grid = np.arange(n).reshape(side_lengths)
    rows: list[npt.NDArray[np.uint8]] = []
    for axis in range(len(side_lengths)):
        lines = np.moveaxis(grid, axis, -1).reshape(-1, side_lengths[axis])
        for line in lines:
            row = np.zeros(n, dtype=np.uint8)
            row[line] = 1
            rows.append(row)
    return np.vstack(rows)


def factor_shift_permutation(side_lengths: tuple[int, ...]) -> npt.NDArray[np.int64]:
    """Map each position to its image under the cyclic shift of the 2x..x2 tensor factors.

    Coordinate i is split as i = 2**r * s + sum_k b_k 2**(r-k); the bits of factor k,
    taken across all coordinates, are rotated by k-1 places.
    """

    r = len(side_lengths)
    n = prod(side_lengths)
    coords = np.array(np.unravel_index(np.arange(n), side_lengths), dtype=np.int64)
    high = coords >> r
    bits = np.stack([(coords >> (r - k)) & 1 for k in range(1, r + 1)])  # (factor, axis, qubit)
    shifted = np.stack([np.roll(bits[k], k, axis=0) for k in range(r)])
    low = sum(shifted[k] << (r - 1 - k) for k in range(r))
    image = (high << r) | low
    return np.ravel_multi_index(tuple(image), side_lengths).astype(np.int64)


def build_qpcc(side_lengths: tuple[int, ...] | list[int]) -> ParityCheckCode:
    """Build the quantum parity check code with the given side lengths."""

    sides = tuple(int(s) for s in side_lengths)
    validate_sides(sides)
    delta = delta_checks(sides)
    shifted = factor_shift_permutation(sides)
    forward = np.empty_like(shifted)
    forward[shifted] = np.arange(shifted.size)
    permutation = PatchPermutation(
        forward=_frozen(forward, np.int64), inverse=_frozen(shifted, np.int64)
    )
    z_checks = delta[:, forward]
    code = ParityCheckCode(
        side_lengths=sides,
        x_checks=_frozen(delta),
        z_checks=_frozen(z_checks),
        permutation=permutation,
    )
    logger.debug("qpcc.built", sides=sides, n=code.n, k=code.k, checks=int(delta.shape[0]))
    return code


def unpermuted_checks(side_lengths: tuple[int, ...] | list[int]) -> tuple[BitMatrix, BitMatrix]:
    """X and Z delta-tensor checks with no permutation applied."""

    sides = tuple(int(s) for s in side_lengths)
    validate_sides(sides)
    delta = delta_checks(sides)
    return delta, delta.copy()


def verify_commutation(
    code: ParityCheckCode | tuple[BitMatrix, BitMatrix],
) -> list[tuple[int, int]]:
    """Return every (X-check, Z-check) index pair with odd overlap; empty means commuting."""

    if isinstance(code, ParityCheckCode):
        x_checks, z_checks = code.x_checks, code.z_checks
    else:
        x_checks, z_checks = code
    overlaps = (x_checks.astype(np.int64) @ z_checks.astype(np.int64).T) % 2
    return [(int(i), int(j)) for i, j in zip(*np.nonzero(overlaps), strict=True)]


def in_stabilizer_span(
    code: ParityCheckCode, pattern: npt.ArrayLike, pauli_type: PauliType
) -> bool:
    """True iff the pattern is a GF(2) combination of the same-type checks."""

    vector = np.asarray(pattern, dtype=np.uint8).ravel() % 2
    if vector.size != code.n:
        raise LengthMismatchError(f"pattern length {vector.size} != code length {code.n}")
    reduced, pivots = code.echelon(PauliType(pauli_type))
    return not reduce_against(reduced, pivots, vector).any()


def rank_k(code: ParityCheckCode) -> int:
    """Logical qubit count from GF(2) ranks rather than the closed formula."""

    return code.n - rank(code.x_checks) - rank(code.z_checks)


def rate_table(max_patches: int = 256) -> list[dict[str, float | int | str]]:
    """Rates of cube-like 1D and 2D codes up to a block size."""

    rows: list[dict[str, float | int | str]] = []
    for side in range(2, max_patches + 1, 2):
        k = side - 2
        rows.append({"dimension": 1, "block": str(side), "n": side, "k": k, "rate": k / side})
    width = 4
    while width * width <= max_patches:
        n = width * width
        k = 2 * (width - 1) ** 2 - n
        rows.append({"dimension": 2, "block": f"{width}x{width}", "n": n, "k": k, "rate": k / n})
        width += 4
    return rows
