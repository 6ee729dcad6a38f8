import numpy as np
import pytest

from yoked_sim.errors import (
    DimensionError,
    DivisibilityError,
    LengthMismatchError,
    ResourceGuardError,
)
from yoked_sim.qpcc import (
    PauliType,
    SearchPath,
    build_qpcc,
    code_parameters,
    in_stabilizer_span,
    is_rectangle,
    minimum_weight_patterns,
    rank_k,
    rate_table,
    unpermuted_checks,
    verify_commutation,
)
from yoked_sim.qpcc.export import parse_sparse_text, sparse_text
from yoked_sim.qpcc.gf2 import nullspace, rank, row_reduce


def _dependent(code, pauli_type: PauliType) -> int:
    return int(code.checks(pauli_type).shape[0]) - code.check_rank(pauli_type)


def test_two_dimensional_code_parameters() -> None:
    code = build_qpcc((8, 8))

    assert code.n == 64
    assert code.k == 34
    assert rank_k(code) == 34
    assert code.d == 4
    assert code.rate == pytest.approx(34 / 64)
    assert code.x_checks.shape == (16, 64)
    assert _dependent(code, PauliType.X) == 1
    assert _dependent(code, PauliType.Z) == 1


def test_one_dimensional_code() -> None:
    code = build_qpcc((4,))

    assert (code.n, code.k, code.d) == (4, 2, 2)
    assert rank_k(code) == 2
    assert np.array_equal(code.permutation.forward, np.arange(4))


def test_three_dimensional_code_rank_matches_formula() -> None:
    code = build_qpcc((8, 8, 8))

    assert code.k == 174
    assert rank_k(code) == 174
    assert verify_commutation(code) == []


@pytest.mark.parametrize("sides", [(4, 4), (8, 8), (8, 12), (8, 8, 8)])
def test_permuted_checks_commute(sides: tuple[int, ...]) -> None:
    assert verify_commutation(build_qpcc(sides)) == []


def test_unpermuted_checks_anticommute_in_two_dimensions() -> None:
    pairs = verify_commutation(unpermuted_checks((4, 4)))

    assert pairs
    assert all(0 <= i < 8 and 0 <= j < 8 for i, j in pairs)


def test_side_length_validation() -> None:
    with pytest.raises(DivisibilityError):
        build_qpcc((6, 6))
    with pytest.raises(DimensionError):
        build_qpcc((2, 2))
    with pytest.raises(DimensionError):
        build_qpcc(())


def test_permutation_is_consistent() -> None:
    code = build_qpcc((8, 8))
    forward = np.asarray(code.permutation.forward)
    inverse = np.asarray(code.permutation.inverse)

    assert np.array_equal(forward[inverse], np.arange(64))
    assert np.array_equal(forward[forward], np.arange(64))
    assert np.array_equal(code.z_checks, code.x_checks[:, forward])


def test_in_stabilizer_span() -> None:
    code = build_qpcc((4, 4))
    both = (code.x_checks[0] + code.x_checks[5]) % 2
    single = np.zeros(16, dtype=np.uint8)
    single[3] = 1

    assert in_stabilizer_span(code, code.x_checks[0], PauliType.X)
    assert in_stabilizer_span(code, both, PauliType.X)
    assert not in_stabilizer_span(code, single, PauliType.X)
    with pytest.raises(LengthMismatchError):
        in_stabilizer_span(code, np.zeros(15), PauliType.X)


def test_code_parameters_two_dimensional() -> None:
    params = code_parameters(build_qpcc((4, 4)), 4)

    assert params.as_tuple() == (16, 2, 4)


def test_code_parameters_zero_logicals_reports_stabilizer_weight() -> None:
    params = code_parameters(build_qpcc((2,)), 2)

    assert params.as_tuple() == (2, 0, 2)


def test_code_parameters_below_cap_reports_bound() -> None:
    params = code_parameters(build_qpcc((4, 4)), 3)

    assert params.distance is None
    assert params.distance_label == ">=3"


def test_search_paths_agree() -> None:
    code = build_qpcc((4, 4))

    by_weight = minimum_weight_patterns(code, PauliType.Z, 4, SearchPath.WEIGHT)
    by_kernel = minimum_weight_patterns(code, PauliType.Z, 4, SearchPath.KERNEL)

    assert by_weight
    assert by_weight == by_kernel


def test_minimum_weight_z_patterns_are_rectangles() -> None:
    code = build_qpcc((8, 8))

    patterns = minimum_weight_patterns(code, PauliType.Z, 4, SearchPath.WEIGHT)

    assert patterns
    assert all(len(p) == 4 for p in patterns)
    assert all(is_rectangle(p, (8, 8)) for p in patterns)


def test_is_rectangle() -> None:
    assert is_rectangle([0, 2, 16, 18], (8, 8))
    assert not is_rectangle([0, 2, 16, 19], (8, 8))
    assert not is_rectangle([0, 2, 16], (8, 8))


def test_resource_guard() -> None:
    with pytest.raises(ResourceGuardError):
        code_parameters(build_qpcc((8, 8)), 8, budget=1000)


def test_rate_table_rows() -> None:
    rows = rate_table(64)
    one_d = {row["block"]: row for row in rows if row["dimension"] == 1}
    two_d = {row["block"]: row for row in rows if row["dimension"] == 2}

    assert one_d["8"]["k"] == 6
    assert two_d["8x8"]["k"] == 34
    assert two_d["4x4"]["rate"] == pytest.approx(2 / 16)


def test_gf2_helpers() -> None:
    matrix = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=np.uint8)

    reduced, pivots = row_reduce(matrix)
    basis = nullspace(matrix)

    assert rank(matrix) == 2
    assert pivots == [0, 1]
    assert reduced.shape == (2, 3)
    assert basis.shape == (1, 3)
    assert not ((matrix.astype(int) @ basis.T.astype(int)) % 2).any()


def test_sparse_text_parses_back() -> None:
    code = build_qpcc((4, 4))

    x_checks, z_checks = parse_sparse_text(sparse_text(code), code.n)

    assert np.array_equal(x_checks, code.x_checks)
    assert np.array_equal(z_checks, code.z_checks)
