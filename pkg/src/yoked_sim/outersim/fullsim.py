"""Circuit-level simulation of one perfect yoke round over a block of patches.

Patch inner graphs are copied once per patch. Boundary edges on the side tagged by
observable 0 are redirected to the patch's first yoke detector; in 2D, edges tagged
by the bottom representative (observable 1) go to its second yoke. Yoke detection
events are the parities of the matching representative flips across each check.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import structlog

from yoked_sim.core.config import get_settings
from yoked_sim.errors import ScaleGuardError, UnsupportedDimensionError
from yoked_sim.matcher import MatchingDecoder, MatchingGraph
from yoked_sim.outersim.gapsim import mask_bits
from yoked_sim.outersim.stats import failure_stats
from yoked_sim.qpcc import ParityCheckCode, PauliType, build_qpcc, in_stabilizer_span
from yoked_sim.schemas.noise import NoiseParams
from yoked_sim.schemas.outer import FailureStats
from yoked_sim.stabsim import (
    BOUNDARY,
    DetectorErrorGraph,
    apply_si1000,
    extract_error_graph,
    generate_surface_memory_circuit,
    observable_sector,
    sample_detectors,
)

logger = structlog.get_logger(__name__)

MAX_DISTANCE = 5
MAX_PATCHES = 16


@dataclass(frozen=True)
class YokeAssignment:
    """Which yoke check absorbs each representative of each patch."""

    num_checks: int
    first: npt.NDArray[np.int64]
    second: npt.NDArray[np.int64] | None

    @classmethod
    def for_code(cls, code: ParityCheckCode) -> YokeAssignment:
        checks = code.checks(PauliType.Z)
        members = [np.flatnonzero(checks[:, q]) for q in range(code.n)]
        first = np.array([m[0] for m in members], dtype=np.int64)
        second = None
        if code.dimension == 2:
            second = np.array([m[1] for m in members], dtype=np.int64)
        return cls(num_checks=int(checks.shape[0]), first=first, second=second)

    def events(
        self, top: npt.NDArray[np.bool_], bottom: npt.NDArray[np.bool_] | None
    ) -> npt.NDArray[np.bool_]:
        """Yoke detection events (shots, checks) from per-patch representative flips."""

        shots, patches = top.shape
        one_hot = np.zeros((patches, self.num_checks), dtype=np.int64)
        one_hot[np.arange(patches), self.first] = 1
        counts = top.astype(np.int64) @ one_hot
        if self.second is not None and bottom is not None:
            other = np.zeros_like(one_hot)
            other[np.arange(patches), self.second] = 1
            counts += bottom.astype(np.int64) @ other
        return (counts % 2).astype(bool)


def yoked_block_graph(
    inner: DetectorErrorGraph, sector: npt.NDArray[np.int64], yokes: YokeAssignment
) -> MatchingGraph:
    """Patch copies of the inner graph joined through yoke detectors.

    Observable bit q of the result is patch q's top-representative flip. Bulk edges
    that carry the observable stay inside their patch.
    """

    local = {int(det): i for i, det in enumerate(sector)}
    size = len(local)
    patches = yokes.first.size
    yoke_base = patches * size
    top = inner.tagged.get(0, frozenset())
    bottom = inner.tagged.get(1, frozenset()) if yokes.second is not None else frozenset()

    edges: list[tuple[int, int, float, int]] = []
    for edge in inner.edges:
        if edge.a not in local or (not edge.is_boundary and edge.b not in local):
            continue
        a = local[edge.a]
        for q in range(patches):
            offset = q * size
            mask = (1 << q) if edge.observables & 1 else 0
            if not edge.is_boundary:
                edges.append((offset + a, offset + local[edge.b], edge.weight, mask))
            elif edge.a in top and edge.observables & 1:
                edges.append((offset + a, yoke_base + int(yokes.first[q]), edge.weight, mask))
            elif edge.a in bottom and edge.observables & 2 and yokes.second is not None:
                edges.append((offset + a, yoke_base + int(yokes.second[q]), edge.weight, mask))
            else:
                edges.append((offset + a, BOUNDARY, edge.weight, mask))
    return MatchingGraph.from_edges(yoke_base + yokes.num_checks, edges)


def simulate_concatenated_single_round(
    d: int,
    shape: tuple[int, ...],
    inner_rounds: int,
    p: float,
    shots: int,
    seed: int,
    *,
    workers: int | None = None,
) -> FailureStats:
    """Z-basis memory of every patch for `inner_rounds`, closed by one perfect yoke round."""

    shape = tuple(shape)
    if len(shape) not in (1, 2):
        raise UnsupportedDimensionError(f"blocks must be 1D or 2D, got {len(shape)}D")
    patches = int(np.prod(shape))
    if d > MAX_DISTANCE or patches > MAX_PATCHES:
        raise ScaleGuardError(
            f"full simulation is limited to d <= {MAX_DISTANCE} and {MAX_PATCHES} patches"
        )
    workers = workers or get_settings().workers
    started = time.perf_counter()

    code = build_qpcc(shape)
    yokes = YokeAssignment.for_code(code)
    two_sided = yokes.second is not None
    circuit = apply_si1000(
        generate_surface_memory_circuit(d, inner_rounds, opposite_observable=two_sided),
        NoiseParams(p=p),
    )
    inner = extract_error_graph(circuit)
    sector = observable_sector(inner)
    combined = yoked_block_graph(inner, sector, yokes)
    decoder = MatchingDecoder(combined)

    data = sample_detectors(circuit, shots * patches, seed, workers=workers)
    detectors = data.detectors[:, sector].reshape(shots, patches * sector.size)
    observables = data.observables.reshape(shots, patches, -1)
    top = observables[:, :, 0]
    events = yokes.events(top, observables[:, :, 1] if two_sided else None)
    flagged = np.concatenate([detectors, events], axis=1)

    failures = 0
    for shot in range(shots):
        syndrome = frozenset(int(i) for i in np.flatnonzero(flagged[shot]))
        predicted = np.zeros(patches, dtype=np.uint8)
        if syndrome:
            predicted = mask_bits(decoder.decode(syndrome).observables, patches)
        residual = (top[shot].astype(np.uint8) + predicted) % 2
        if not in_stabilizer_span(code, residual, PauliType.X):
            failures += 1

    stats = failure_stats(
        shots=shots,
        failures_x=failures,
        failures_z=0,
        failures_any=failures,
        patches=patches,
        inner_rounds_total=inner_rounds,
        wall_seconds=time.perf_counter() - started,
        config={
            "d": d,
            "shape": list(shape),
            "inner_rounds": inner_rounds,
            "p": p,
            "shots": shots,
            "seed": seed,
        },
    )
    logger.info(
        "outersim.full_simulation",
        d=d,
        shape=list(shape),
        shots=shots,
        failures=failures,
        rate=stats.rate,
    )
    return stats
