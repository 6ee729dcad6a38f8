"""Circuit-level gap collection from SI1000 surface-code memories."""

from __future__ import annotations

from multiprocessing import get_context

import numpy as np
import numpy.typing as npt
import structlog

from yoked_sim.core.config import get_settings
from yoked_sim.errors import ParameterError
from yoked_sim.gapstore.distribution import build_distribution
from yoked_sim.matcher import MatchingDecoder, as_syndrome
from yoked_sim.schemas.gaps import GapDistribution
from yoked_sim.schemas.noise import NoiseParams
from yoked_sim.stabsim import (
    DetectorErrorGraph,
    apply_si1000,
    extract_error_graph,
    generate_surface_memory_circuit,
    sample_detectors,
)

logger = structlog.get_logger(__name__)

GapSample = tuple[float, bool]


def _gaps_for_chunk(
    args: tuple[DetectorErrorGraph, npt.NDArray[np.bool_], npt.NDArray[np.bool_]],
) -> list[GapSample]:
    graph, detectors, truths = args
    decoder = MatchingDecoder(graph)
    samples = []
    for row, truth in zip(detectors, truths, strict=True):
        gap = decoder.complementary_gap(as_syndrome(row), 0, int(truth))
        samples.append((gap.value, gap.failed))
    return samples


def decode_gaps(
    graph: DetectorErrorGraph,
    detectors: npt.NDArray[np.bool_],
    truths: npt.NDArray[np.bool_],
    *,
    workers: int = 1,
) -> list[GapSample]:
    """Signed gap and failure bit per shot, in shot order."""

    chunks = max(1, min(workers * 4, len(detectors)))
    jobs = [
        (graph, det, tru)
        for det, tru in zip(
            np.array_split(detectors, chunks), np.array_split(truths, chunks), strict=True
        )
    ]
    if workers > 1 and len(jobs) > 1:
        with get_context("spawn").Pool(processes=workers) as pool:
            results = pool.map(_gaps_for_chunk, jobs)
    else:
        results = [_gaps_for_chunk(job) for job in jobs]
    return [sample for chunk in results for sample in chunk]


def collect_gaps(
    d: int,
    rounds: int,
    p: float,
    shots: int,
    seed: int,
    *,
    workers: int | None = None,
    schedule: str | None = None,
) -> GapDistribution:
    """Z-basis memory of `rounds` rounds decoded shot by shot into a gap histogram."""

    if shots < 1:
        raise ParameterError("shots must be positive")
    settings = get_settings()
    workers = workers or settings.workers
    noise = NoiseParams(p=p)
    circuit = apply_si1000(
        generate_surface_memory_circuit(d, rounds, schedule=schedule or settings.schedule),
        noise,
    )
    graph = extract_error_graph(circuit)
    data = sample_detectors(circuit, shots, seed, workers=workers)
    samples = decode_gaps(graph, data.detectors, data.observables[:, 0], workers=workers)
    dist = build_distribution(samples, rounds, d, noise_label=noise.label)
    logger.info(
        "gapstore.collected",
        d=d,
        rounds=rounds,
        p=p,
        shots=shots,
        failure_rate=dist.failure_rate,
    )
    return dist
