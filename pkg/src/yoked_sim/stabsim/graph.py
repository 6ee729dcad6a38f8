"""Detector error graphs: extraction from circuits and phenomenological construction."""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import structlog
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from yoked_sim.errors import DecompositionError, ParameterError
from yoked_sim.stabsim.circuit import NoisyCircuit
from yoked_sim.stabsim.frame import (
    ElementaryError,
    FrameSimulator,
    InjectedNoise,
    enumerate_elementary_errors,
)
from yoked_sim.stabsim.surface import SurfaceLayout

logger = structlog.get_logger(__name__)

BOUNDARY = -1
_CHUNK = 4096


class EdgeKind(str, Enum):
    """Origin of a graph edge."""

    CIRCUIT = "circuit"
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"


def combine_probabilities(p1: float, p2: float) -> float:
    """Probability that exactly one of two independent mechanisms fires.

    Written through the biases 1 - 2p so that a coin-flip input stays exactly 1/2.
    """

    return 0.5 - 0.5 * (1 - 2 * p1) * (1 - 2 * p2)


def edge_weight(probability: float) -> float:
    return math.log((1 - probability) / probability)


@dataclass(frozen=True)
class GraphEdge:
    a: int
    b: int
    probability: float
    observables: int = 0
    kind: EdgeKind = EdgeKind.CIRCUIT
    multiplicity: int = 1

    @property
    def weight(self) -> float:
        return edge_weight(self.probability)

    @property
    def is_boundary(self) -> bool:
        return self.b == BOUNDARY

    @property
    def key(self) -> tuple[int, int]:
        return (self.a, self.b)


@dataclass(frozen=True)
class DetectorErrorGraph:
    """Weighted matching graph over detectors plus one boundary node.

    `tagged[k]` lists the detectors whose boundary edge lies on the side crossed by
    observable k; these edges feed the virtual detector used for forced decoding.
    """

    num_detectors: int
    edges: tuple[GraphEdge, ...]
    num_observables: int = 1
    tagged: dict[int, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for edge in self.edges:
            # p = 1/2 carries no information and becomes a free (weight 0) edge
            if not 0.0 < edge.probability <= 0.5:
                raise ParameterError(
                    f"edge {edge.key} probability {edge.probability} outside (0, 1/2]"
                )
            if not 0 <= edge.a < self.num_detectors or not (
                edge.b == BOUNDARY or edge.a < edge.b < self.num_detectors
            ):
                raise ParameterError(f"edge {edge.key} is not a canonical detector pair")

    def count(self, kind: EdgeKind) -> int:
        """Number of merged mechanisms of one kind."""

        return sum(e.multiplicity for e in self.edges if e.kind is kind)

    def boundary_edges(self) -> list[GraphEdge]:
        return [e for e in self.edges if e.is_boundary]

    def to_text(self) -> str:
        lines = [f"DETECTORS {self.num_detectors}", f"OBSERVABLES {self.num_observables}"]
        for e in self.edges:
            b = "B" if e.is_boundary else str(e.b)
            lines.append(
                f"EDGE {e.a} {b} {e.probability!r} {e.observables} {e.kind.value} {e.multiplicity}"
            )
        for obs, detectors in sorted(self.tagged.items()):
            lines.append(" ".join(["TAG", str(obs), *(str(d) for d in sorted(detectors))]))
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> DetectorErrorGraph:
    """Parse the sparse text format written by `DetectorErrorGraph.to_text`."""

    num_detectors = 0
    num_observables = 1
    edges: list[GraphEdge] = []
    tagged: dict[int, frozenset[int]] = {}
    for raw in text.splitlines():
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "DETECTORS":
            num_detectors = int(parts[1])
        elif parts[0] == "OBSERVABLES":
            num_observables = int(parts[1])
        elif parts[0] == "EDGE":
            edges.append(
                GraphEdge(
                    a=int(parts[1]),
                    b=BOUNDARY if parts[2] == "B" else int(parts[2]),
                    probability=float(parts[3]),
                    observables=int(parts[4]),
                    kind=EdgeKind(parts[5]) if len(parts) > 5 else EdgeKind.CIRCUIT,
                    multiplicity=int(parts[6]) if len(parts) > 6 else 1,
                )
            )
        elif parts[0] == "TAG":
            tagged[int(parts[1])] = frozenset(int(d) for d in parts[2:])
        else:
            raise ParameterError(f"unknown graph record {parts[0]!r}")
    return DetectorErrorGraph(num_detectors, tuple(edges), num_observables, tagged)


class _EdgeAccumulator:
    """Merge parallel mechanisms; on mask disagreement the likelier mask wins."""

    def __init__(self) -> None:
        self._edges: dict[tuple[int, int], list[float | int]] = {}
        self._kinds: dict[tuple[int, int], EdgeKind] = {}
        self.conflicts = 0

    @staticmethod
    def canonical(detectors: Iterable[int]) -> tuple[int, int]:
        ordered = sorted(detectors)
        if len(ordered) == 1:
            return (ordered[0], BOUNDARY)
        return (ordered[0], ordered[1])

    def copy(self) -> _EdgeAccumulator:
        twin = _EdgeAccumulator()
        twin._edges = {k: list(v) for k, v in self._edges.items()}
        twin._kinds = dict(self._kinds)
        return twin

    def __contains__(self, key: tuple[int, int]) -> bool:
        return key in self._edges

    def mask(self, key: tuple[int, int]) -> int:
        return int(self._edges[key][1])

    def add(self, key: tuple[int, int], p: float, mask: int, kind: EdgeKind) -> None:
        if key not in self._edges:
            self._edges[key] = [p, mask, 1, p]
            self._kinds[key] = kind
            return
        entry = self._edges[key]
        if int(entry[1]) != mask:
            self.conflicts += 1
            if p > float(entry[3]):
                entry[1], entry[3] = mask, p
        entry[0] = combine_probabilities(float(entry[0]), p)
        entry[2] = int(entry[2]) + 1

    def edges(self) -> tuple[GraphEdge, ...]:
        out = []
        for key in sorted(self._edges, key=lambda k: (k[0], k[1] == BOUNDARY, k[1])):
            p, mask, multiplicity, _ = self._edges[key]
            out.append(
                GraphEdge(key[0], key[1], float(p), int(mask), self._kinds[key], int(multiplicity))
            )
        return tuple(out)


def tag_boundary_sides(
    edges: Iterable[GraphEdge], num_observables: int
) -> dict[int, frozenset[int]]:
    """For each observable, the detectors whose boundary edge flips it."""

    edges = list(edges)
    return {
        k: frozenset(e.a for e in edges if e.is_boundary and e.observables >> k & 1)
        for k in range(num_observables)
    }


def _decompose(
    detectors: tuple[int, ...], mask: int, known: _EdgeAccumulator
) -> list[tuple[int, int]] | None:
    """Split a detector set into known 1- and 2-sets whose masks XOR to `mask`."""

    if not detectors:
        return [] if mask == 0 else None
    head, rest = detectors[0], detectors[1:]
    options = [(head, other) for other in rest if (head, other) in known]
    if (head, BOUNDARY) in known:
        options.append((head, BOUNDARY))
    for key in options:
        remaining = tuple(d for d in rest if d != key[1])
        tail = _decompose(remaining, mask ^ known.mask(key), known)
        if tail is not None:
            return [key, *tail]
    return None


def _propagate(
    circuit: NoisyCircuit, errors: list[ElementaryError]
) -> tuple[list[tuple[int, ...]], list[int]]:
    simulator = FrameSimulator(circuit)
    detector_sets: list[tuple[int, ...]] = []
    masks: list[int] = []
    weights = 1 << np.arange(circuit.num_observables, dtype=object)
    for start in range(0, len(errors), _CHUNK):
        chunk = errors[start : start + _CHUNK]
        noise = InjectedNoise(circuit, [[e] for e in chunk])
        dets, obs = simulator.run(len(chunk), noise)
        for row in range(len(chunk)):
            detector_sets.append(tuple(int(d) for d in np.flatnonzero(dets[row])))
            masks.append(int(sum(weights[obs[row]])) if obs.shape[1] else 0)
    return detector_sets, masks


def extract_error_graph(circuit: NoisyCircuit) -> DetectorErrorGraph:
    """Propagate every elementary error to its detectors and build the matching graph."""

    errors = enumerate_elementary_errors(circuit)
    detector_sets, masks = _propagate(circuit, errors)

    known = _EdgeAccumulator()
    hyper: list[tuple[tuple[int, ...], int, float]] = []
    for error, dets, mask in zip(errors, detector_sets, masks, strict=True):
        if not dets:
            if mask:
                raise DecompositionError(
                    f"error at instruction {error.step} flips an observable without detection"
                )
            continue
        if len(dets) <= 2:
            known.add(known.canonical(dets), error.probability, mask, EdgeKind.CIRCUIT)
        else:
            hyper.append((dets, mask, error.probability))

    reference = known.copy()
    for dets, mask, p in hyper:
        parts = _decompose(dets, mask, reference)
        if parts is None:
            raise DecompositionError(f"detector set {dets} cannot be built from existing edges")
        for key in parts:
            known.add(key, p, reference.mask(key), EdgeKind.CIRCUIT)

    edges = known.edges()
    graph = DetectorErrorGraph(
        num_detectors=circuit.num_detectors,
        edges=edges,
        num_observables=circuit.num_observables,
        tagged=tag_boundary_sides(edges, circuit.num_observables),
    )
    logger.info(
        "stabsim.graph_extracted",
        detectors=graph.num_detectors,
        edges=len(edges),
        elementary_errors=len(errors),
        hyperedges=len(hyper),
        mask_conflicts=known.conflicts,
    )
    return graph


def build_phenomenological_graph(
    d: int, rounds: int, p_data: float, p_meas: float
) -> DetectorErrorGraph:
    """Space-time graph of the Z-type detectors with independent data and measurement flips."""

    if d < 3 or d % 2 == 0:
        raise ParameterError(f"distance must be an odd integer >= 3, got {d}")
    if rounds < 1:
        raise ParameterError("rounds must be >= 1")
    for name, value in (("p_data", p_data), ("p_meas", p_meas)):
        if not 0.0 < value < 0.5:
            raise ParameterError(f"{name}={value} must lie in (0, 1/2)")

    layout = SurfaceLayout(d)
    plaquettes = layout.of_type("Z")
    position = {p: i for i, p in enumerate(plaquettes)}
    per_round = len(plaquettes)
    logical = set(layout.logical_row)

    touching: dict[tuple[int, int], list[int]] = {c: [] for c in layout.data}
    for plaquette in plaquettes:
        for coord in layout.support(plaquette):
            touching[coord].append(position[plaquette])

    edges = _EdgeAccumulator()
    for rnd in range(rounds):
        for coord in layout.data:
            dets = [rnd * per_round + i for i in touching[coord]]
            mask = 1 if coord in logical else 0
            edges.add(edges.canonical(dets), p_data, mask, EdgeKind.SPACELIKE)
        if rnd + 1 < rounds:
            for i in range(per_round):
                key = (rnd * per_round + i, (rnd + 1) * per_round + i)
                edges.add(key, p_meas, 0, EdgeKind.TIMELIKE)

    merged = edges.edges()
    return DetectorErrorGraph(
        num_detectors=rounds * per_round,
        edges=merged,
        num_observables=1,
        tagged=tag_boundary_sides(merged, 1),
    )


def observable_sector(graph: DetectorErrorGraph) -> np.ndarray:
    """Detectors in connected components that carry an observable; others are neutral."""

    bulk = [e for e in graph.edges if not e.is_boundary]
    rows = [e.a for e in bulk]
    cols = [e.b for e in bulk]
    adjacency = sparse.coo_matrix(
        (np.ones(len(bulk)), (rows, cols)), shape=(graph.num_detectors, graph.num_detectors)
    )
    _, labels = connected_components(adjacency, directed=False)
    carrying = {int(labels[e.a]) for e in graph.edges if e.observables}
    return np.flatnonzero(np.isin(labels, list(carrying)))
