"""Path-counting scaling laws for yoked and unyoked memories."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import structlog

from yoked_sim.errors import DegenerateDataError, ParameterError
from yoked_sim.schemas.plan import ScalingFit

logger = structlog.get_logger(__name__)

DEFAULT_FITS: dict[int, ScalingFit] = {
    0: ScalingFit(dimension=0, lam=3.0, prefactor=1 / 20),
    1: ScalingFit(dimension=1, lam=8.0, prefactor=1 / 500),
    2: ScalingFit(dimension=2, lam=50.0, prefactor=1 / 200_000),
}

FitRow = tuple[float, float, float, float, float, float]


def predict_rate(fit: ScalingFit, d: float, r_i: float, r_o: float, n: float) -> float:
    """Cumulative failure probability, clamped to [0, 1]."""

    if min(d, r_i, r_o, n) <= 0:
        raise ParameterError("d, r_i, r_o and n must all be positive")
    e_r, e_n = fit.exponents
    log_rate = (
        np.log(r_o)
        + e_r * np.log(r_i)
        + e_n * np.log(n)
        - d * np.log(fit.lam)
        + np.log(fit.prefactor)
    )
    return float(min(1.0, np.exp(log_rate)))


def fit_scaling(data: Sequence[FitRow], dimension: int) -> ScalingFit:
    """Weighted least squares on log(rate) for log(lam) and log(A).

    Rows are (d, r_i, r_o, n, rate, weight); rows with zero rate carry no information.
    """

    if dimension not in DEFAULT_FITS:
        raise ParameterError(f"dimension must be 0, 1 or 2, got {dimension}")
    rows = np.array([row for row in data if row[4] > 0 and row[5] > 0], dtype=np.float64)
    if rows.size == 0 or np.unique(rows[:, 0]).size < 2:
        raise DegenerateDataError("fitting needs positive rates at two or more distances")

    d, r_i, r_o, n, rate, weight = rows.T
    e_r, e_n = DEFAULT_FITS[dimension].exponents
    target = np.log(rate) - np.log(r_o) - e_r * np.log(r_i) - e_n * np.log(n)
    design = np.column_stack([-d, np.ones_like(d)])
    root_w = np.sqrt(weight)
    (log_lam, log_a), *_ = np.linalg.lstsq(design * root_w[:, None], target * root_w, rcond=None)
    if log_lam <= 0:
        raise DegenerateDataError(f"fitted suppression base {np.exp(log_lam):.3g} is not above 1")
    fit = ScalingFit(
        dimension=dimension, lam=float(np.exp(log_lam)), prefactor=float(np.exp(log_a))
    )
    logger.info("planner.fitted", dimension=dimension, lam=fit.lam, prefactor=fit.prefactor)
    return fit


def fit_power_law(
    xs: Sequence[float], ys: Sequence[float], weights: Sequence[float] | None = None
) -> tuple[float, float]:
    """(exponent, prefactor) of y = prefactor * x**exponent from a log-log line."""

    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    keep = (x > 0) & (y > 0)
    if np.unique(x[keep]).size < 2:
        raise DegenerateDataError("power-law fit needs two distinct positive abscissae")
    w = None if weights is None else np.sqrt(np.asarray(weights, dtype=np.float64)[keep])
    slope, intercept = np.polyfit(np.log(x[keep]), np.log(y[keep]), 1, w=w)
    return float(slope), float(np.exp(intercept))
