"""Composite Gauss-Legendre rules and deterministic weighted sums."""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import InvalidInputError
from .kernels import pairwise_sum

PANEL_ORDER = 16


@lru_cache(maxsize=64)
def _reference_rule(order: int):
    x, w = leggauss(order)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def gauss_legendre_composite(a: float, b: float, nodes: int = 2048, order: int = PANEL_ORDER):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, b].

    ``nodes`` is split into equal panels of ``order`` points; when it is not a
    multiple of ``order`` a single panel with ``nodes`` points is used.
    """
    if nodes < 1:
        raise InvalidInputError("need at least one quadrature node")
    if not b > a:
        raise InvalidInputError(f"empty interval [{a}, {b}]")
    if nodes % order == 0:
        panels = nodes // order
    else:
        panels, order = 1, nodes
    x, w = _reference_rule(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    return t, wt


def weighted_sum(weights, values) -> float:
    """sum_i weights[i] * values[i] with a fixed pairwise reduction order."""
    return pairwise_sum(np.asarray(weights, dtype=np.float64) * np.asarray(values, dtype=np.float64))


def integrate(func, a: float, b: float, nodes: int = 2048) -> float:
    t, w = gauss_legendre_composite(a, b, nodes)
    return weighted_sum(w, func(t))
