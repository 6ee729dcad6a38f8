import numpy as np
import pytest

from yoked_sim.core.config import get_settings
from yoked_sim.errors import (
    DistributionMismatchError,
    ScaleGuardError,
    UnsupportedDimensionError,
)
from yoked_sim.outersim import (
    YokeAssignment,
    build_outer_graph,
    failure_stats,
    gapsim,
    mask_bits,
    memory_experiment,
    run_gap_simulation,
    simulate_concatenated_single_round,
    wilson_interval,
)
from yoked_sim.qpcc import PauliType, build_qpcc
from yoked_sim.schemas.gaps import GapBin, GapDistribution
from yoked_sim.schemas.outer import SimConfig
from yoked_sim.schemas.run import ValidationConfig
from yoked_sim.service import validate_pipeline
from yoked_sim.stabsim import BOUNDARY


def _point_mass(db: int, d: int = 3, base_rounds: int = 30) -> GapDistribution:
    return GapDistribution(
        base_rounds=base_rounds,
        d=d,
        bins=[GapBin(db=db, count=1000, failures=0)],
        total=1000,
    )


def _config(shape: tuple[int, ...], outer_rounds: int = 1, shots: int = 100) -> SimConfig:
    return SimConfig(
        d=3, inner_rounds=30, outer_rounds=outer_rounds, shape=shape, seed=5, shots=shots
    )


def test_one_dimensional_outer_graph() -> None:
    x_graph, z_graph = build_outer_graph(_config((4,)), build_qpcc((4,)))

    assert x_graph.num_nodes == 1
    assert x_graph.count_spacelike() == 4
    assert x_graph.count_timelike() == 0
    assert np.all(x_graph.endpoints[:, 1] == BOUNDARY)
    assert z_graph.residual_type is PauliType.X


def test_two_dimensional_outer_graph() -> None:
    code = build_qpcc((4, 4))

    x_graph, z_graph = build_outer_graph(_config((4, 4), outer_rounds=2), code)
    a, b, patch = x_graph.spacelike_edges()
    t_a, t_b = x_graph.timelike_edges()

    assert x_graph.checks_per_layer == 8
    assert x_graph.num_nodes == 16
    assert x_graph.count_spacelike() == 32
    assert x_graph.count_timelike() == 8
    assert a.size == b.size == patch.size == 32
    assert np.all(t_b - t_a == 8)
    assert np.array_equal(z_graph.endpoints, x_graph.endpoints[code.permutation.forward])


def test_extrapolation_factors_default_to_ten_d_base_rounds() -> None:
    config = SimConfig(d=3, inner_rounds=60, outer_rounds=2, shape=(4,), shots=1)

    x_graph, _ = build_outer_graph(config, build_qpcc((4,)))
    custom, _ = build_outer_graph(config, build_qpcc((4,)), base_rounds=20)

    assert x_graph.m_spacelike == pytest.approx(2.0)
    assert x_graph.m_timelike == pytest.approx(10.0)
    assert custom.m_spacelike == pytest.approx(3.0)


def test_outer_graph_rejects_mismatches() -> None:
    with pytest.raises(DistributionMismatchError):
        build_outer_graph(_config((4,)), build_qpcc((8,)))
    with pytest.raises(UnsupportedDimensionError):
        build_outer_graph(_config((8, 8, 8)), build_qpcc((8, 8, 8)))


def test_near_perfect_gaps_never_fail() -> None:
    config = _config((4, 4), outer_rounds=2, shots=200)

    stats = run_gap_simulation(config, build_qpcc((4, 4)), _point_mass(60), workers=1)

    assert stats.shots == 200
    assert stats.failures_any == 0
    assert stats.rate == 0.0
    assert stats.inner_rounds_total == 60


def test_coin_flip_gaps_fail() -> None:
    config = _config((4,), shots=50)

    stats = run_gap_simulation(config, build_qpcc((4,)), _point_mass(0), workers=1)

    assert stats.failures_any > 0
    assert stats.failures_any <= stats.failures_x + stats.failures_z
    assert stats.patches == 4


def _mixed() -> GapDistribution:
    return GapDistribution(
        base_rounds=30,
        d=3,
        bins=[
            GapBin(db=-2, count=5, failures=5),
            GapBin(db=4, count=50, failures=0),
            GapBin(db=12, count=45, failures=0),
        ],
        total=100,
    )


def test_gap_simulation_is_reproducible() -> None:
    config = _config((4,), shots=60)

    first = run_gap_simulation(config, build_qpcc((4,)), _mixed(), workers=1)
    second = run_gap_simulation(config, build_qpcc((4,)), _mixed(), workers=1)

    assert first.failures_any == second.failures_any
    assert first.failures_x == second.failures_x


def test_gap_simulation_does_not_depend_on_chunk_size(monkeypatch) -> None:
    config = _config((4,), shots=40)
    reference = run_gap_simulation(config, build_qpcc((4,)), _mixed(), workers=1)
    chunked = get_settings().model_copy(update={"shot_block": 3})
    monkeypatch.setattr(gapsim, "get_settings", lambda: chunked)

    stats = run_gap_simulation(config, build_qpcc((4,)), _mixed(), workers=1)

    assert reference.failures_any > 0
    assert stats.failures_x == reference.failures_x
    assert stats.failures_z == reference.failures_z
    assert stats.failures_any == reference.failures_any


def test_gap_simulation_checks_distance() -> None:
    with pytest.raises(DistributionMismatchError):
        run_gap_simulation(_config((4,)), build_qpcc((4,)), _point_mass(10, d=5))


def test_yoke_assignment_events() -> None:
    code = build_qpcc((4, 4))
    yokes = YokeAssignment.for_code(code)

    for q in (0, 5, 15):
        top = np.zeros((1, 16), dtype=bool)
        top[0, q] = True
        events = yokes.events(top, None)
        assert np.flatnonzero(events[0]).tolist() == [int(yokes.first[q])]

    assert yokes.second is not None
    assert np.all(yokes.first < yokes.second)


def test_full_simulation_without_noise() -> None:
    stats = simulate_concatenated_single_round(3, (4,), 2, 0.0, 5, 1, workers=1)

    assert stats.failures_any == 0
    assert stats.patches == 4
    assert stats.config["shape"] == [4]


def test_full_simulation_scale_guard() -> None:
    with pytest.raises(ScaleGuardError):
        simulate_concatenated_single_round(7, (4,), 2, 1e-3, 5, 1)
    with pytest.raises(UnsupportedDimensionError):
        simulate_concatenated_single_round(3, (8, 8, 8), 2, 1e-3, 5, 1)


def test_validation_without_noise_agrees() -> None:
    config = ValidationConfig(d=3, shape=(4,), inner_rounds=2, p=0.0, shots=5)

    report = validate_pipeline(config, workers=1)

    assert report.ratio == 1.0
    assert report.passed
    assert report.gap.failures_any == 0


def test_memory_experiment_without_noise() -> None:
    stats = memory_experiment(3, 3, 0.0, 10, seed=0, workers=1)

    assert stats.failures_any == 0
    assert stats.inner_rounds_total == 3


def test_failure_stats_scale_to_patch_rounds() -> None:
    stats = failure_stats(
        shots=100,
        failures_x=4,
        failures_z=2,
        failures_any=5,
        patches=10,
        inner_rounds_total=20,
    )

    assert stats.rate == pytest.approx(5 / 100 / 200)
    assert stats.ci_low < stats.rate < stats.ci_high


def test_wilson_interval() -> None:
    low, high = wilson_interval(0, 100)

    assert low == pytest.approx(0.0, abs=1e-12)
    assert 0.0 < high < 0.05
    assert wilson_interval(0, 0) == (0.0, 1.0)


def test_mask_bits() -> None:
    assert mask_bits(0b101, 4).tolist() == [1, 0, 1, 0]
