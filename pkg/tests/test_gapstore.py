import numpy as np
import pytest
from pydantic import ValidationError

from yoked_sim.errors import EmptyInputError, NotFoundError, ParameterError
from yoked_sim.gapstore import (
    GapSampler,
    build_distribution,
    calibration_table,
    collect_gaps,
    cosine_window,
    extrapolate_min_of_m,
    failure_probability,
    fold_bins,
    ks_distance,
    load_distribution,
    save_distribution,
    signed_bin,
    smooth,
)
from yoked_sim.schemas.gaps import CalibrationModel, GapBin, GapDistribution


def _distribution(bins: list[tuple[int, float, float]], base_rounds: int = 30) -> GapDistribution:
    return GapDistribution(
        base_rounds=base_rounds,
        d=3,
        noise_label="si1000p0.001",
        bins=[GapBin(db=db, count=count, failures=failures) for db, count, failures in bins],
        total=sum(count for _, count, _ in bins),
    )


def _spread() -> GapDistribution:
    return _distribution(
        [(-4, 2, 2), (-1, 3, 3), (2, 10, 0), (6, 25, 0), (11, 40, 0), (17, 20, 0)]
    )


def test_signed_bin_rounds_to_nearest_db() -> None:
    assert signed_bin(2.4, False) == 2
    assert signed_bin(2.5, False) == 3
    assert signed_bin(2.6, True) == -3
    assert signed_bin(0.2, True) == 0


def test_build_distribution() -> None:
    dist = build_distribution([(1.2, False), (1.4, False), (3.0, True)], 30, 3)

    assert [(b.db, b.count, b.failures) for b in dist.bins] == [(-3, 1, 1), (1, 2, 0)]
    assert dist.total == 3
    assert dist.failure_rate == pytest.approx(1 / 3)


def test_build_distribution_needs_samples() -> None:
    with pytest.raises(EmptyInputError):
        build_distribution([], 30, 3)


def test_distribution_validation() -> None:
    with pytest.raises(ValidationError):
        _distribution([(2, 1, 3)])
    with pytest.raises(ValidationError):
        GapDistribution(
            base_rounds=30,
            d=3,
            bins=[GapBin(db=2, count=1, failures=0), GapBin(db=1, count=1, failures=0)],
            total=2,
        )


def test_failure_probability() -> None:
    model = CalibrationModel()

    assert failure_probability(model, 0.0) == pytest.approx(0.5)
    assert failure_probability(model, 10.0) == pytest.approx(1 / (1 + 10**0.9))
    assert failure_probability(model, 10.0) == pytest.approx(0.1118, abs=1e-4)
    assert failure_probability(model, 60.0) < 1e-5
    assert failure_probability(CalibrationModel(rescale=1.0), 10.0) == pytest.approx(1 / 11)
    values = failure_probability(model, [0.0, 10.0])
    assert isinstance(values, np.ndarray)
    assert values.shape == (2,)


def test_cosine_window_is_normalised_and_symmetric() -> None:
    window = cosine_window(3)

    assert window.size == 7
    assert window.sum() == pytest.approx(1.0)
    assert np.allclose(window, window[::-1])
    assert window.argmax() == 3


def test_smoothing_keeps_area() -> None:
    dist = _spread()

    curve = smooth(dist, 3)

    assert curve.total == pytest.approx(1.0)
    assert curve.dbs[0] == -7
    assert curve.dbs[-1] == 20
    assert curve.mass.size == curve.dbs.size
    assert np.all(curve.mass >= 0)


def test_smoothing_rejects_empty_window() -> None:
    with pytest.raises(ParameterError):
        smooth(_spread(), 0)


def test_extrapolation_identity() -> None:
    dist = _spread()

    assert extrapolate_min_of_m(dist, 1) == dist


def test_extrapolation_of_point_mass() -> None:
    dist = _distribution([(14, 100, 0)])

    out = extrapolate_min_of_m(dist, 5)

    assert [(b.db, b.count) for b in out.bins] == [(14, pytest.approx(100.0))]
    assert out.extrapolated_m == 5
    assert out.bins[0].failures == pytest.approx(100 * failure_probability(CalibrationModel(), 14))


def test_extrapolation_composes() -> None:
    dist = _spread()

    twice = extrapolate_min_of_m(extrapolate_min_of_m(dist, 2), 3)
    once = extrapolate_min_of_m(dist, 6)

    assert twice.extrapolated_m == pytest.approx(6)
    assert ks_distance(twice, once) == pytest.approx(0.0, abs=1e-12)
    assert [b.db for b in twice.bins] == [b.db for b in once.bins]


def test_extrapolation_shifts_towards_small_gaps() -> None:
    dist = _spread()

    out = extrapolate_min_of_m(dist, 4)

    assert np.all(out.cdf() >= dist.cdf() - 1e-12)
    assert out.failure_rate > dist.failure_rate


def test_fractional_extrapolation_is_allowed() -> None:
    out = extrapolate_min_of_m(_spread(), 0.5)

    assert out.extrapolated_m == pytest.approx(0.5)
    with pytest.raises(ParameterError):
        extrapolate_min_of_m(_spread(), 0)


def test_fold_bins_and_calibration_table() -> None:
    dist = _distribution([(-3, 50, 50), (3, 150, 0), (8, 100, 0)])

    magnitudes, counts, failures = fold_bins(dist)
    rows = calibration_table(dist)

    assert magnitudes.tolist() == [3, 8]
    assert counts.tolist() == [200, 100]
    assert failures.tolist() == [50, 0]
    assert rows[0].empirical == pytest.approx(0.25)
    assert rows[1].predicted == pytest.approx(failure_probability(CalibrationModel(), 8))


def test_sampler_uses_empirical_rate_for_populated_bins() -> None:
    dist = _distribution([(-3, 50, 50), (3, 150, 0)])

    sampler = GapSampler(dist, empirical_min_samples=100)
    sparse = GapSampler(dist, empirical_min_samples=1000)

    assert sampler.expected_failure_rate == pytest.approx(0.25)
    assert sparse.expected_failure_rate == pytest.approx(
        failure_probability(CalibrationModel(), 3)
    )


def test_sampler_draws_follow_the_histogram() -> None:
    dist = _distribution([(5, 200, 0), (20, 800, 0)])
    sampler = GapSampler(dist, empirical_min_samples=100)

    gaps, errored = sampler.draw(np.random.default_rng(4), 20_000)
    again, _ = sampler.draw(np.random.default_rng(4), 20_000)

    assert set(np.unique(gaps).tolist()) <= {5.0, 20.0}
    assert np.mean(gaps == 5.0) == pytest.approx(0.2, abs=0.02)
    assert np.array_equal(gaps, again)
    assert errored.mean() < 0.1


def test_archive_round_trip(tmp_path) -> None:
    dist = _spread()

    path = save_distribution(dist, tmp_path)

    assert path.name == "gaps_d3_r30_si1000p0.001.json"
    assert load_distribution(path) == dist


def test_missing_archive() -> None:
    with pytest.raises(NotFoundError):
        load_distribution("no/such/gaps.json")


def test_collection_is_deterministic() -> None:
    first = collect_gaps(3, 3, 5e-3, 30, seed=2)
    second = collect_gaps(3, 3, 5e-3, 30, seed=2)

    assert first == second
    assert first.total == 30
    assert first.base_rounds == 3
    assert first.noise_label == "si1000p0.005"


def test_collection_at_strongest_noise() -> None:
    dist = collect_gaps(3, 2, 0.1, 8, seed=1)

    assert dist.total == 8
    assert dist.noise_label == "si1000p0.1"
    assert all(b.db >= 0 or b.failures == b.count for b in dist.bins)
