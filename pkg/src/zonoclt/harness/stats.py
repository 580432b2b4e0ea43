"""Summary statistics used by the experiments."""
from __future__ import annotations

import numpy as np
from scipy.special import ndtr, ndtri

from ..errors import InvalidInputError


def ks_distance(samples, cdf=ndtr) -> float:
    """Kolmogorov distance ``sup_t |F_M(t) - cdf(t)|`` of the empirical CDF, standard normal by default."""
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    M = x.size
    if M == 0:
        raise InvalidInputError("ks_distance needs at least one sample")
    f = cdf(x)
    i = np.arange(1, M + 1)
    return float(max(np.max(i / M - f), np.max(f - (i - 1) / M)))


def standardize(samples) -> np.ndarray:
    """Centre by the sample mean and scale by the sample standard deviation (ddof=1)."""
    x = np.asarray(samples, dtype=float)
    return (x - x.mean()) / x.std(ddof=1)


def qq_pairs(standardized) -> np.ndarray:
    """``(M, 2)`` array of (normal quantile at (i - 0.5)/M, i-th order statistic)."""
    x = np.sort(np.asarray(standardized, dtype=float))
    M = x.size
    return np.column_stack([ndtri((np.arange(1, M + 1) - 0.5) / M), x])


def loglog_slope(xs, ys) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def standard_error_of_mean(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(x.std(ddof=1) / np.sqrt(x.size))
