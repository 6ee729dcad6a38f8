"""Gap-sampling Monte Carlo of the outer code."""

from __future__ import annotations

import time
from multiprocessing import get_context

import numpy as np
import numpy.typing as npt
import structlog

from yoked_sim.core.config import get_settings
from yoked_sim.errors import DistributionMismatchError
from yoked_sim.gapstore import GapSampler, extrapolate_min_of_m
from yoked_sim.matcher import MatchingDecoder, MatchingGraph
from yoked_sim.outersim.graph import OuterGraph, build_outer_graph
from yoked_sim.outersim.stats import failure_stats
from yoked_sim.qpcc import ParityCheckCode, in_stabilizer_span
from yoked_sim.schemas.gaps import CalibrationModel, GapDistribution
from yoked_sim.schemas.outer import FailureStats, SimConfig
from yoked_sim.stabsim import BOUNDARY, shot_rng

logger = structlog.get_logger(__name__)

BoolArray = npt.NDArray[np.bool_]


def mask_bits(mask: int, width: int) -> npt.NDArray[np.uint8]:
    return np.array([(mask >> q) & 1 for q in range(width)], dtype=np.uint8)


class OuterShotRunner:
    """Samples edge gaps for one outer graph and decodes each shot."""

    def __init__(
        self,
        graph: OuterGraph,
        code: ParityCheckCode,
        spacelike: GapSampler,
        timelike: GapSampler | None,
    ) -> None:
        self.graph = graph
        self.code = code
        self.spacelike = spacelike
        self.timelike = timelike
        self.s_a, self.s_b, self.s_patch = graph.spacelike_edges()
        self.t_a, self.t_b = graph.timelike_edges()
        self.s_masks = [1 << int(q) for q in self.s_patch]

    def _syndrome(self, s_err: BoolArray, t_err: BoolArray) -> frozenset[int]:
        flips = np.zeros(self.graph.num_nodes, dtype=np.int64)
        np.add.at(flips, self.s_a[s_err], 1)
        b = self.s_b[s_err]
        np.add.at(flips, b[b != BOUNDARY], 1)
        np.add.at(flips, self.t_a[t_err], 1)
        np.add.at(flips, self.t_b[t_err], 1)
        return frozenset(int(i) for i in np.flatnonzero(flips % 2))

    def _shot_graph(
        self, s_gap: npt.NDArray[np.float64], t_gap: npt.NDArray[np.float64]
    ) -> MatchingGraph:
        edges = [
            (int(a), int(b), float(w), mask)
            for a, b, w, mask in zip(self.s_a, self.s_b, s_gap, self.s_masks, strict=True)
        ]
        edges += [
            (int(a), int(b), float(w), 0) for a, b, w in zip(self.t_a, self.t_b, t_gap, strict=True)
        ]
        return MatchingGraph.from_edges(self.graph.num_nodes, edges)

    def run_shot(self, rng: np.random.Generator) -> bool:
        """Whether one shot leaves a logical residual."""

        s_gap, s_err = self.spacelike.draw(rng, self.s_a.size)
        if self.timelike is not None and self.t_a.size:
            t_gap, t_err = self.timelike.draw(rng, self.t_a.size)
        else:
            t_gap = np.zeros(0)
            t_err = np.zeros(0, dtype=bool)

        patches = self.graph.num_patches
        truth = np.bincount(self.s_patch[s_err], minlength=patches) % 2
        syndrome = self._syndrome(s_err, t_err)
        predicted = np.zeros(patches, dtype=np.int64)
        if syndrome:
            decoder = MatchingDecoder(self._shot_graph(s_gap, t_gap))
            predicted = mask_bits(decoder.decode(syndrome).observables, patches)
        residual = (truth + predicted) % 2
        return not in_stabilizer_span(self.code, residual, self.graph.residual_type)


def _run_chunk(
    args: tuple[OuterShotRunner, OuterShotRunner, int, int, int],
) -> tuple[int, int, int]:
    x_runner, z_runner, seed, start, count = args
    failures_x = failures_z = failures_any = 0
    for shot in range(start, start + count):
        rng = shot_rng(seed, shot)
        # the X-detector graph catches Z-type residuals and vice versa
        z_failed = x_runner.run_shot(rng)
        x_failed = z_runner.run_shot(rng)
        failures_x += x_failed
        failures_z += z_failed
        failures_any += x_failed or z_failed
    return failures_x, failures_z, failures_any


def _samplers(
    dist: GapDistribution, model: CalibrationModel, factors: set[float]
) -> dict[float, GapSampler]:
    return {m: GapSampler(extrapolate_min_of_m(dist, m, model), model) for m in factors}


def run_gap_simulation(
    config: SimConfig,
    code: ParityCheckCode,
    dist: GapDistribution,
    model: CalibrationModel | None = None,
    *,
    workers: int | None = None,
) -> FailureStats:
    """Sample outer edge gaps from the extrapolated distributions and decode both graphs."""

    if dist.d != config.d:
        raise DistributionMismatchError(
            f"gaps were collected at d={dist.d} but the simulation uses d={config.d}"
        )
    model = model or CalibrationModel()
    settings = get_settings()
    workers = workers or settings.workers
    started = time.perf_counter()

    x_graph, z_graph = build_outer_graph(config, code, base_rounds=dist.base_rounds)
    factors = {x_graph.m_spacelike}
    if config.outer_rounds > 1:
        factors.add(x_graph.m_timelike)
    samplers = _samplers(dist, model, factors)
    timelike = samplers.get(x_graph.m_timelike) if config.outer_rounds > 1 else None
    runners = [
        OuterShotRunner(graph, code, samplers[graph.m_spacelike], timelike)
        for graph in (x_graph, z_graph)
    ]

    chunk = settings.shot_block
    jobs = [
        (runners[0], runners[1], config.seed, start, min(chunk, config.shots - start))
        for start in range(0, config.shots, chunk)
    ]
    if workers > 1 and len(jobs) > 1:
        with get_context("spawn").Pool(processes=workers) as pool:
            counts = pool.map(_run_chunk, jobs)
    else:
        counts = [_run_chunk(job) for job in jobs]

    failures_x, failures_z, failures_any = (sum(c[i] for c in counts) for i in range(3))
    stats = failure_stats(
        shots=config.shots,
        failures_x=failures_x,
        failures_z=failures_z,
        failures_any=failures_any,
        patches=code.n,
        inner_rounds_total=config.inner_rounds * config.outer_rounds,
        wall_seconds=time.perf_counter() - started,
        config=config.model_dump(mode="json"),
    )
    logger.info(
        "outersim.gap_simulation",
        shape=list(config.shape),
        d=config.d,
        shots=config.shots,
        failures=failures_any,
        rate=stats.rate,
    )
    return stats
