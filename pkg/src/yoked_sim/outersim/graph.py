"""Outer error graphs of 1D and 2D yoked blocks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from yoked_sim.errors import DistributionMismatchError, UnsupportedDimensionError
from yoked_sim.qpcc import ParityCheckCode, PauliType
from yoked_sim.schemas.outer import SimConfig
from yoked_sim.stabsim.graph import BOUNDARY

IntArray = npt.NDArray[np.int64]


@dataclass(frozen=True)
class OuterGraph:
    """Yoke detectors of one Pauli type over `outer_rounds` layers.

    Node ids are layer * checks_per_layer + check. Each patch contributes one
    spacelike edge per layer between the checks that contain it (the boundary in
    1D); timelike edges join a check to itself in the next layer.
    """

    pauli: PauliType
    shape: tuple[int, ...]
    outer_rounds: int
    checks_per_layer: int
    endpoints: IntArray
    m_spacelike: float
    m_timelike: float

    @property
    def dimension(self) -> int:
        return len(self.shape)

    @property
    def num_patches(self) -> int:
        return int(self.endpoints.shape[0])

    @property
    def num_nodes(self) -> int:
        return self.outer_rounds * self.checks_per_layer

    @property
    def residual_type(self) -> PauliType:
        """Pauli type of the errors this graph detects."""

        return self.pauli.opposite

    def patch_endpoints(self, patch: int) -> tuple[int, int]:
        a, b = self.endpoints[patch]
        return int(a), int(b)

    def spacelike_edges(self) -> tuple[IntArray, IntArray, IntArray]:
        """(a, b, patch) for every layer, layer-major."""

        layers = np.repeat(np.arange(self.outer_rounds), self.num_patches)
        offset = layers * self.checks_per_layer
        a = np.tile(self.endpoints[:, 0], self.outer_rounds) + offset
        b = np.tile(self.endpoints[:, 1], self.outer_rounds)
        b = np.where(b == BOUNDARY, BOUNDARY, b + offset)
        patch = np.tile(np.arange(self.num_patches), self.outer_rounds)
        return a, b, patch

    def timelike_edges(self) -> tuple[IntArray, IntArray]:
        count = (self.outer_rounds - 1) * self.checks_per_layer
        a = np.arange(count, dtype=np.int64)
        return a, a + self.checks_per_layer

    def count_spacelike(self) -> int:
        return self.outer_rounds * self.num_patches

    def count_timelike(self) -> int:
        return (self.outer_rounds - 1) * self.checks_per_layer


def _endpoints(checks: npt.NDArray[np.uint8], dimension: int) -> IntArray:
    weights = checks.sum(axis=0)
    if dimension == 1 and np.all(weights == 1):
        first = np.argmax(checks, axis=0)
        return np.stack([first, np.full_like(first, BOUNDARY)], axis=1).astype(np.int64)
    if dimension == 2 and np.all(weights == 2):
        pairs = [np.flatnonzero(checks[:, q]) for q in range(checks.shape[1])]
        return np.array(pairs, dtype=np.int64)
    raise UnsupportedDimensionError(
        f"{dimension}D block has patches in {sorted(set(weights.tolist()))} checks"
    )


def build_outer_graph(
    config: SimConfig, code: ParityCheckCode, *, base_rounds: int | None = None
) -> tuple[OuterGraph, OuterGraph]:
    """(X graph, Z graph), named by detector type.

    Extrapolation factors are rounds-equivalent over the gap samples' base rounds,
    which default to 10*d.
    """

    if code.dimension not in (1, 2):
        raise UnsupportedDimensionError(
            f"outer graphs exist for 1D and 2D blocks, not {code.dimension}D"
        )
    if tuple(code.side_lengths) != tuple(config.shape):
        raise DistributionMismatchError(
            f"code sides {code.side_lengths} differ from configured shape {config.shape}"
        )
    base = base_rounds or 10 * config.d
    graphs = []
    for pauli in (PauliType.X, PauliType.Z):
        checks = code.checks(pauli)
        graphs.append(
            OuterGraph(
                pauli=pauli,
                shape=tuple(config.shape),
                outer_rounds=config.outer_rounds,
                checks_per_layer=int(checks.shape[0]),
                endpoints=_endpoints(checks, code.dimension),
                m_spacelike=config.inner_rounds / base,
                m_timelike=config.effective_timelike_rounds / base,
            )
        )
    return graphs[0], graphs[1]
