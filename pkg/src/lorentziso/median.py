"""Weighted median: the exact minimizer of c -> sum_i w_i |x_i - c|."""
from __future__ import annotations

import numpy as np

from .errors import EmptyDomainError
from .kernels import l1_deviation_scan


def weighted_median(values, weights) -> float:
    """Lowest weighted median (infimum of the median interval).

    The smallest value c with w({x <= c}) >= W/2.  Any point of the median
    interval minimizes the L1 deviation; the lowest one is the canonical pick.
    """
    x = np.asarray(values, dtype=np.float64).ravel()
    w = np.asarray(weights, dtype=np.float64).ravel()
    if x.size == 0:
        raise EmptyDomainError("weighted median of an empty set")
    order = np.argsort(x, kind="stable")
    cum = np.cumsum(w[order])
    k = int(np.searchsorted(cum, 0.5 * cum[-1], side="left"))
    return float(x[order[min(k, x.size - 1)]])


def l1_residual(values, weights, center) -> float:
    """sum_i w_i |x_i - center| (pairwise-summed)."""
    return float(l1_deviation_scan(values, weights, np.array([center], dtype=np.float64))[0])
