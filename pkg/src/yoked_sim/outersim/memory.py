"""Unyoked surface-code memory experiments."""

from __future__ import annotations

import time

import numpy as np
import structlog

from yoked_sim.core.config import get_settings
from yoked_sim.matcher import MatchingDecoder, as_syndrome
from yoked_sim.outersim.stats import failure_stats
from yoked_sim.schemas.noise import NoiseParams
from yoked_sim.schemas.outer import FailureStats
from yoked_sim.stabsim import (
    apply_si1000,
    extract_error_graph,
    generate_surface_memory_circuit,
    sample_detectors,
)

logger = structlog.get_logger(__name__)


def memory_experiment(
    d: int,
    rounds: int,
    p: float,
    shots: int,
    seed: int,
    *,
    workers: int | None = None,
    schedule: str | None = None,
) -> FailureStats:
    """Logical error rate of a single patch decoded with plain matching."""

    settings = get_settings()
    started = time.perf_counter()
    circuit = apply_si1000(
        generate_surface_memory_circuit(d, rounds, schedule=schedule or settings.schedule),
        NoiseParams(p=p),
    )
    decoder = MatchingDecoder(extract_error_graph(circuit))
    data = sample_detectors(circuit, shots, seed, workers=workers or settings.workers)
    predicted = np.array(
        [decoder.decode(as_syndrome(row)).flip(0) for row in data.detectors], dtype=bool
    )
    failures = int(np.count_nonzero(predicted != data.observables[:, 0]))
    stats = failure_stats(
        shots=shots,
        failures_x=failures,
        failures_z=0,
        failures_any=failures,
        patches=1,
        inner_rounds_total=rounds,
        wall_seconds=time.perf_counter() - started,
        config={"d": d, "rounds": rounds, "p": p, "shots": shots, "seed": seed},
    )
    logger.info("outersim.memory", d=d, rounds=rounds, p=p, failures=failures, rate=stats.rate)
    return stats
