"""Exact minimum-weight perfect matching with forced logical classes."""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache

import networkx as nx
import numpy as np
import numpy.typing as npt
import structlog
from scipy import sparse
from scipy.sparse.csgraph import dijkstra

from yoked_sim.errors import InfeasibleClassError, ParameterError, UnreachableNodeError
from yoked_sim.matcher.graph import MatchingGraph
from yoked_sim.stabsim.graph import BOUNDARY, DetectorErrorGraph

logger = structlog.get_logger(__name__)

DB_PER_NEPER = 10.0 / math.log(10.0)
# Dijkstra treats stored zeros as edges only unreliably; zero weights are lifted to this.
_ZERO_FLOOR = 1e-12
# Matching weights are exact integers: path weights quantised to 2**-40 above tie digits.
_WEIGHT_BITS = 40

Syndrome = frozenset[int]


@dataclass(frozen=True)
class MatchResult:
    """Matched pairs, total path weight and predicted observable flips."""

    pairs: tuple[tuple[int, int], ...]
    weight: float
    observables: int

    def flip(self, observable: int) -> int:
        return (self.observables >> observable) & 1


@dataclass(frozen=True)
class GapValue:
    """Signed complementary gap in dB.

    `failed` is set when the unforced decoder mispredicts the observable; the value is
    then non-positive, and a zero-magnitude misprediction still counts as a failure.
    """

    value: float
    failed: bool

    @property
    def magnitude(self) -> float:
        return abs(self.value)


def as_syndrome(nodes: Iterable[int] | npt.NDArray[np.bool_]) -> Syndrome:
    array = np.asarray(nodes)
    if array.dtype == bool:
        return frozenset(int(i) for i in np.flatnonzero(array))
    return frozenset(int(i) for i in array)


def _tie_key(weight: float, position: int, digit: int, k: int) -> int:
    """Integer matching weight; the low digits order equal weights by lowest partner.

    Each of the k flagged nodes owns one base-(k+1) digit, most significant first. The
    digit is 0 for a boundary partner and the partner's rank otherwise.
    """

    base = k + 1
    return round(weight * (1 << _WEIGHT_BITS)) * base**k + digit * base ** (k - 1 - position)


class _PathMetric:
    """Shortest paths over a matching graph with a sink-only boundary node."""

    def __init__(self, graph: MatchingGraph) -> None:
        self.graph = graph
        n = graph.num_nodes
        self.boundary = n
        bulk = graph.b != BOUNDARY
        rows = np.concatenate([graph.a[bulk], graph.b[bulk], graph.a[~bulk]])
        cols = np.concatenate([graph.b[bulk], graph.a[bulk], np.full((~bulk).sum(), n)])
        base = np.maximum(graph.weights, _ZERO_FLOOR)
        data = np.concatenate([base[bulk], base[bulk], base[~bulk]])
        self.csgraph = sparse.csr_matrix((data, (rows, cols)), shape=(n + 1, n + 1))
        self.edge_info: dict[tuple[int, int], tuple[float, int]] = {}
        for a, b, w, mask in zip(graph.a, graph.b, graph.weights, graph.masks, strict=True):
            key = (int(a), n if b == BOUNDARY else int(b))
            self.edge_info[key] = (float(w), mask)
            self.edge_info[(key[1], key[0])] = (float(w), mask)

    def from_sources(
        self, sources: list[int]
    ) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.int32]]:
        dist, pred = dijkstra(
            self.csgraph, directed=True, indices=sources, return_predecessors=True
        )
        return np.atleast_2d(dist), np.atleast_2d(pred)

    def walk(self, pred_row: npt.NDArray[np.int32], source: int, target: int) -> tuple[float, int]:
        """Exact weight and XOR mask of the stored shortest path."""

        weight, mask = 0.0, 0
        node = target
        while node != source:
            prev = int(pred_row[node])
            if prev < 0:
                raise UnreachableNodeError(f"no path from {source} to {target}")
            w, m = self.edge_info[(prev, node)]
            weight += w
            mask ^= m
            node = prev
        return weight, mask


class MatchingDecoder:
    """Decoder bound to one graph; results are memoised per syndrome."""

    def __init__(
        self,
        graph: MatchingGraph | DetectorErrorGraph,
        *,
        tagged: dict[int, frozenset[int]] | None = None,
        cache_size: int = 1 << 16,
    ) -> None:
        if isinstance(graph, DetectorErrorGraph):
            self._tagged = dict(graph.tagged)
            graph = MatchingGraph.from_detector_graph(graph)
        else:
            self._tagged = dict(tagged or {})
        if tagged is not None:
            self._tagged = dict(tagged)
        self.graph = graph
        self._metric = _PathMetric(graph)
        self._forced: dict[int, MatchingDecoder] = {}
        self.decode = lru_cache(maxsize=cache_size)(self._decode)  # type: ignore[method-assign]

    @property
    def num_nodes(self) -> int:
        return self.graph.num_nodes

    def _decode(self, syndrome: Syndrome) -> MatchResult:
        """Minimum-weight matching of the flagged nodes to each other or the boundary.

        Among equal-weight matchings the lowest flagged node takes the boundary first,
        then its lowest-index partner, and so on down the sorted syndrome.
        """

        flagged = sorted(syndrome)
        if any(not 0 <= f < self.graph.num_nodes for f in flagged):
            raise ParameterError(f"syndrome {flagged} references nodes outside the graph")
        if not flagged:
            return MatchResult(pairs=(), weight=0.0, observables=0)

        metric = self._metric
        dist, pred = metric.from_sources(flagged)
        k = len(flagged)
        boundary_col = metric.boundary

        matching_graph = nx.Graph()
        matching_graph.add_nodes_from(range(2 * k))
        for i in range(k):
            reachable = False
            for j in range(i + 1, k):
                w = dist[i, flagged[j]]
                if np.isfinite(w):
                    matching_graph.add_edge(i, j, weight=_tie_key(float(w), i, j, k))
                    reachable = True
            if np.isfinite(dist[i, boundary_col]):
                edge_weight = _tie_key(float(dist[i, boundary_col]), i, 0, k)
                matching_graph.add_edge(i, k + i, weight=edge_weight)
                reachable = True
            if not reachable and not any(np.isfinite(dist[j, flagged[i]]) for j in range(i)):
                raise UnreachableNodeError(f"node {flagged[i]} reaches no partner or boundary")
            for j in range(i + 1, k):
                matching_graph.add_edge(k + i, k + j, weight=0)

        matched = nx.min_weight_matching(matching_graph)
        if len(matched) != k:
            raise UnreachableNodeError(f"no perfect matching for syndrome {flagged}")

        pairs: list[tuple[int, int]] = []
        total, mask = 0.0, 0
        for u, v in sorted(tuple(sorted(pair)) for pair in matched):
            if u >= k:
                continue
            if v >= k:
                w, m = metric.walk(pred[u], flagged[u], boundary_col)
                pairs.append((flagged[u], BOUNDARY))
            else:
                w, m = metric.walk(pred[u], flagged[u], flagged[v])
                pairs.append((flagged[u], flagged[v]))
            total += w
            mask ^= m
        return MatchResult(pairs=tuple(pairs), weight=total, observables=mask)

    def _forced_decoder(self, observable: int) -> MatchingDecoder:
        if observable not in self._forced:
            tagged = self._tagged.get(observable)
            if not tagged:
                raise ParameterError(
                    f"graph has no boundary-side tagging for observable {observable}"
                )
            self._forced[observable] = MatchingDecoder(
                self.graph.with_virtual_detector(tagged), tagged={}
            )
        return self._forced[observable]

    def class_results(self, syndrome: Syndrome, observable: int) -> dict[int, MatchResult]:
        """Best matching in each reachable observable class, keyed by flip parity."""

        forced = self._forced_decoder(observable)
        virtual = self.graph.num_nodes
        found: dict[int, MatchResult] = {}
        unreachable = 0
        for switch in (False, True):
            flagged = syndrome | {virtual} if switch else syndrome
            try:
                raw = forced.decode(frozenset(flagged))
            except UnreachableNodeError:
                unreachable += 1
                continue
            result = self._fold_virtual(raw, virtual)
            parity = result.flip(observable)
            if parity not in found or result.weight < found[parity].weight:
                found[parity] = result
        if unreachable == 2:
            raise UnreachableNodeError(f"syndrome {sorted(syndrome)} cannot be matched")
        return found

    @staticmethod
    def _fold_virtual(result: MatchResult, virtual: int) -> MatchResult:
        pairs = []
        for u, v in result.pairs:
            u = BOUNDARY if u == virtual else u
            v = BOUNDARY if v == virtual else v
            pairs.append((u, v) if u != BOUNDARY else (v, u))
        return MatchResult(tuple(pairs), result.weight, result.observables)

    def decode_forced(self, syndrome: Syndrome, observable: int, flip_parity: int) -> MatchResult:
        """Minimum-weight matching restricted to one flip parity of an observable."""

        if flip_parity not in (0, 1):
            raise ParameterError("flip_parity must be 0 or 1")
        found = self.class_results(frozenset(syndrome), observable)
        if flip_parity not in found:
            raise InfeasibleClassError(
                f"no matching flips observable {observable} with parity {flip_parity}"
            )
        return found[flip_parity]

    def complementary_gap(self, syndrome: Syndrome, observable: int, truth: int) -> GapValue:
        """Signed dB gap between the class decode() picks and its complement."""

        syndrome = frozenset(syndrome)
        found = self.class_results(syndrome, observable)
        if len(found) < 2:
            raise InfeasibleClassError(
                f"syndrome {sorted(syndrome)} admits only one class of observable {observable}"
            )
        predicted = self.decode(syndrome).flip(observable)
        magnitude = max(0.0, found[1 - predicted].weight - found[predicted].weight) * DB_PER_NEPER
        failed = predicted != truth
        return GapValue(value=-magnitude if failed else magnitude, failed=failed)


def decode(graph: MatchingGraph | DetectorErrorGraph, syndrome: Iterable[int]) -> MatchResult:
    return MatchingDecoder(graph).decode(as_syndrome(list(syndrome)))


def decode_forced(
    graph: MatchingGraph | DetectorErrorGraph,
    syndrome: Iterable[int],
    observable: int,
    flip_parity: int,
    *,
    tagged: dict[int, frozenset[int]] | None = None,
) -> MatchResult:
    decoder = MatchingDecoder(graph, tagged=tagged)
    return decoder.decode_forced(as_syndrome(list(syndrome)), observable, flip_parity)


def complementary_gap(
    graph: MatchingGraph | DetectorErrorGraph,
    syndrome: Iterable[int],
    observable: int,
    truth: int,
    *,
    tagged: dict[int, frozenset[int]] | None = None,
) -> GapValue:
    decoder = MatchingDecoder(graph, tagged=tagged)
    return decoder.complementary_gap(as_syndrome(list(syndrome)), observable, truth)
