import pytest

from yoked_sim.errors import (
    DegenerateDataError,
    InfeasiblePlanError,
    ParameterError,
    UnsupportedDimensionError,
)
from yoked_sim.planner import (
    CSV_COLUMNS,
    DEFAULT_FITS,
    block_logicals,
    candidate_shapes,
    estimate_footprint,
    fit_power_law,
    fit_scaling,
    optimize_layout,
    plan_row,
    predict_rate,
    savings_ratio,
    savings_table,
)
from yoked_sim.schemas.plan import CostModel, ScalingFit, StorageMode


def _synthetic_rows(fit: ScalingFit) -> list[tuple[float, float, float, float, float, float]]:
    rows = []
    for d in (3, 5, 7, 9):
        for r_i in (10.0, 40.0):
            rate = predict_rate(fit, d, r_i, 1.0, 4.0)
            rows.append((float(d), r_i, 1.0, 4.0, rate, 1.0))
    return rows


def test_predict_rate_unyoked() -> None:
    assert predict_rate(DEFAULT_FITS[0], 3, 30, 1, 1) == pytest.approx(30 / 27 / 20)
    assert predict_rate(DEFAULT_FITS[0], 3, 30, 1, 1) == pytest.approx(0.05556, abs=1e-5)


def test_predict_rate_is_clamped() -> None:
    assert predict_rate(DEFAULT_FITS[2], 1, 10_000, 10, 256) == 1.0
    with pytest.raises(ParameterError):
        predict_rate(DEFAULT_FITS[1], 3, 0, 1, 8)


def test_fit_scaling_recovers_parameters() -> None:
    truth = ScalingFit(dimension=1, lam=8.0, prefactor=1 / 500)

    fitted = fit_scaling(_synthetic_rows(truth), 1)

    assert fitted.lam == pytest.approx(8.0, rel=1e-6)
    assert fitted.prefactor == pytest.approx(1 / 500, rel=1e-6)


def test_fit_scaling_needs_two_distances() -> None:
    rows = [(3.0, 10.0, 1.0, 4.0, 1e-3, 1.0), (3.0, 20.0, 1.0, 4.0, 2e-3, 1.0)]

    with pytest.raises(DegenerateDataError):
        fit_scaling(rows, 1)
    with pytest.raises(DegenerateDataError):
        fit_scaling([(3.0, 10.0, 1.0, 4.0, 0.0, 1.0), (5.0, 10.0, 1.0, 4.0, 0.0, 1.0)], 1)


def test_fit_scaling_rejects_growth_with_distance() -> None:
    rows = [(3.0, 10.0, 1.0, 4.0, 1e-4, 1.0), (5.0, 10.0, 1.0, 4.0, 1e-2, 1.0)]

    with pytest.raises(DegenerateDataError):
        fit_scaling(rows, 1)


def test_fit_power_law() -> None:
    exponent, prefactor = fit_power_law([1.0, 2.0, 4.0, 8.0], [3.0, 12.0, 48.0, 192.0])

    assert exponent == pytest.approx(2.0)
    assert prefactor == pytest.approx(3.0)
    with pytest.raises(DegenerateDataError):
        fit_power_law([2.0, 2.0], [1.0, 3.0])


def test_block_logicals() -> None:
    assert block_logicals((12, 12)) == 98
    assert block_logicals((8,)) == 6
    assert block_logicals((8, 8, 8)) == 174


@pytest.mark.parametrize(
    ("target", "d"),
    [(1e-9, 17), (1e-10, 19), (1e-12, 23), (1e-14, 27), (1e-16, 31), (1e-18, 35)],
)
def test_unyoked_distance_by_target(target: float, d: int) -> None:
    plan = optimize_layout(target, 0, StorageMode.COLD)

    assert plan.d == d
    assert plan.qubits_per_logical == 2 * (d + 1) ** 2
    assert plan.predicted_rate <= target


def test_unyoked_hot_storage_doubles_footprint() -> None:
    cold = optimize_layout(1e-14, 0, "cold")
    hot = optimize_layout(1e-14, 0, "hot")

    assert cold.qubits_per_logical == 1568
    assert hot.qubits_per_logical == 3136


def test_two_dimensional_cold_plan() -> None:
    plan = optimize_layout(1e-14, 2, StorageMode.COLD)

    assert plan.d == 13
    assert plan.shape == (12, 12)
    assert plan.blocks == 1
    assert plan.cycle_rounds == 3952
    assert plan.patches == 169
    assert plan.physical_qubits == 66248
    assert plan.logical_qubits == 98
    assert plan.qubits_per_logical == pytest.approx(676.0)
    assert plan.predicted_rate == pytest.approx(5.3496e-15, rel=1e-3)


def test_savings_ratio_at_one_in_ten_to_fourteen() -> None:
    ratio = savings_ratio(1e-14)

    assert ratio == pytest.approx(1568 / 676)
    assert ratio >= 2.0


def test_savings_grow_towards_lower_targets() -> None:
    assert savings_ratio(1e-18) > savings_ratio(1e-9)


def test_one_dimensional_hot_storage_saves_qubits() -> None:
    assert savings_ratio(1e-14, dimension=1, mode=StorageMode.HOT) >= 1.5


def test_two_dimensional_hot_storage_is_not_modelled() -> None:
    with pytest.raises(UnsupportedDimensionError):
        optimize_layout(1e-12, 2, StorageMode.HOT)
    with pytest.raises(UnsupportedDimensionError):
        estimate_footprint(2, "hot", 5, (8, 8), 1)


def test_infeasible_and_invalid_targets() -> None:
    with pytest.raises(InfeasiblePlanError):
        optimize_layout(1e-40, 0)
    with pytest.raises(ParameterError):
        optimize_layout(0.0, 2)
    with pytest.raises(ParameterError):
        optimize_layout(1.5, 2)


def test_estimate_footprint_one_dimensional_cold() -> None:
    plan = estimate_footprint(1, StorageMode.COLD, 9, (8,), 3)

    assert plan.cycle_rounds == 9 * (8 * 3 + 2)
    assert plan.patches == 3 * 8 + 8
    assert plan.logical_qubits == 18
    assert plan.physical_qubits == plan.patches * 200
    block_rate = predict_rate(DEFAULT_FITS[1], 9, plan.cycle_rounds, 1, 8)
    assert plan.predicted_rate == pytest.approx(3 * block_rate / (plan.cycle_rounds * 18))


def test_estimate_footprint_validates_blocks() -> None:
    with pytest.raises(ParameterError):
        estimate_footprint(2, "cold", 5, (8,), 1)
    with pytest.raises(ParameterError):
        estimate_footprint(1, "cold", 5, (4,), 0)


def test_candidate_shapes() -> None:
    square = list(candidate_shapes(2, CostModel()))
    rectangular = list(candidate_shapes(2, CostModel(allow_rectangular_2d=True)))

    assert square == [(4, 4), (8, 8), (12, 12), (16, 16)]
    assert len(rectangular) == 16
    assert (8, 12) in rectangular


def test_savings_table_rows() -> None:
    rows = savings_table([1e-12])

    assert len(rows) == 5
    assert all(set(row) == set(CSV_COLUMNS) for row in rows)
    assert {(row["dimension"], row["mode"]) for row in rows} == {
        (0, "cold"),
        (0, "hot"),
        (1, "cold"),
        (1, "hot"),
        (2, "cold"),
    }


def test_plan_row_formatting() -> None:
    plan = optimize_layout(1e-14, 2)

    row = plan_row(1e-14, plan)

    assert row["target"] == "1e-14"
    assert row["block"] == "12x12"
    assert row["qubits_per_logical"] == "676"
    assert row["m_b"] == 1
