"""Weighted graphs in the form the matching decoder consumes."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from yoked_sim.errors import ParameterError
from yoked_sim.stabsim.graph import BOUNDARY, DetectorErrorGraph

WeightedEdge = tuple[int, int, float, int]


@dataclass(frozen=True)
class MatchingGraph:
    """Nodes 0..num_nodes-1 plus a boundary; at most one edge per node pair.

    `b == BOUNDARY` marks a boundary edge. Masks are observable bitsets of any width.
    """

    num_nodes: int
    a: npt.NDArray[np.int64]
    b: npt.NDArray[np.int64]
    weights: npt.NDArray[np.float64]
    masks: tuple[int, ...]

    @classmethod
    def from_edges(cls, num_nodes: int, edges: Iterable[WeightedEdge]) -> MatchingGraph:
        """Collapse parallel edges to the lightest one."""

        best: dict[tuple[int, int], tuple[float, int]] = {}
        for a, b, weight, mask in edges:
            if weight < 0:
                raise ParameterError(f"edge ({a}, {b}) has negative weight {weight}")
            if b != BOUNDARY and a > b:
                a, b = b, a
            if a == b:
                raise ParameterError(f"self-loop on node {a}")
            key = (a, b)
            if key not in best or weight < best[key][0]:
                best[key] = (weight, mask)
        keys = sorted(best)
        return cls(
            num_nodes=num_nodes,
            a=np.array([k[0] for k in keys], dtype=np.int64),
            b=np.array([k[1] for k in keys], dtype=np.int64),
            weights=np.array([best[k][0] for k in keys], dtype=np.float64),
            masks=tuple(best[k][1] for k in keys),
        )

    @classmethod
    def from_detector_graph(cls, graph: DetectorErrorGraph) -> MatchingGraph:
        return cls.from_edges(
            graph.num_detectors,
            ((e.a, e.b, e.weight, e.observables) for e in graph.edges),
        )

    def scaled(self, factor: float) -> MatchingGraph:
        return MatchingGraph(self.num_nodes, self.a, self.b, self.weights * factor, self.masks)

    def with_virtual_detector(self, tagged: Iterable[int]) -> MatchingGraph:
        """Move the boundary edges of `tagged` nodes onto a new node appended at the end."""

        virtual = self.num_nodes
        tagged = set(tagged)
        b = self.b.copy()
        redirect = (b == BOUNDARY) & np.isin(self.a, list(tagged))
        b[redirect] = virtual
        return MatchingGraph(virtual + 1, self.a, b, self.weights, self.masks)
