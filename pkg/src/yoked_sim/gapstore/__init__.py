"""Gap distributions: collection, calibration, smoothing, extrapolation and sampling."""

from yoked_sim.gapstore.archive import archive_path, load_distribution, save_distribution
from yoked_sim.gapstore.calibration import (
    CalibrationRow,
    calibration_table,
    failure_probability,
    fold_bins,
)
from yoked_sim.gapstore.collect import collect_gaps, decode_gaps
from yoked_sim.gapstore.distribution import (
    SmoothedCurve,
    build_distribution,
    cosine_window,
    extrapolate_min_of_m,
    ks_distance,
    signed_bin,
    smooth,
)
from yoked_sim.gapstore.sampling import GapSampler, sample_signed_gap

__all__ = [
    "CalibrationRow",
    "GapSampler",
    "SmoothedCurve",
    "archive_path",
    "build_distribution",
    "calibration_table",
    "collect_gaps",
    "cosine_window",
    "decode_gaps",
    "extrapolate_min_of_m",
    "failure_probability",
    "fold_bins",
    "ks_distance",
    "load_distribution",
    "sample_signed_gap",
    "save_distribution",
    "signed_bin",
    "smooth",
]
