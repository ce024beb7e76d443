"""Pure-numpy reference implementations of the hot kernels.

Every function here has a twin in ``_kernels.pyx``.  ``pairwise_sum`` and
``l1_deviation_scan`` use the same fixed reduction tree in both backends, so
their results agree bit for bit.
"""
import numpy as np

BACKEND = "python"

_SCAN_CHUNK = 256


def _tree_reduce(buf):
    # buf has a power-of-two length along the last axis
    while buf.shape[-1] > 1:
        buf = buf[..., 0::2] + buf[..., 1::2]
    return buf[..., 0]


def _padded(x):
    m = x.shape[-1]
    size = 1
    while size < m:
        size *= 2
    if size == m:
        return x
    pad = np.zeros(x.shape[:-1] + (size - m,), dtype=np.float64)
    return np.concatenate([x, pad], axis=-1)


def pairwise_sum(x):
    """Sum ``x`` along a balanced binary tree padded with zeros."""
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    if x.size == 0:
        return 0.0
    return float(_tree_reduce(_padded(x)))


def l1_deviation_scan(values, weights, centers):
    """``out[j] = sum_i weights[i] * |values[i] - centers[j]|`` (pairwise-summed)."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    centers = np.ascontiguousarray(centers, dtype=np.float64)
    out = np.empty(centers.size, dtype=np.float64)
    if values.size == 0:
        out[:] = 0.0
        return out
    for start in range(0, centers.size, _SCAN_CHUNK):
        c = centers[start:start + _SCAN_CHUNK]
        terms = weights[None, :] * np.abs(values[None, :] - c[:, None])
        out[start:start + c.size] = _tree_reduce(_padded(terms))
    return out


def lipschitz_excess(points, logf, pairs):
    """``|logf[i] - logf[j]| - d_H(x_i, x_j)`` for each index pair (i, j)."""
    points = np.asarray(points, dtype=np.float64)
    logf = np.asarray(logf, dtype=np.float64)
    pairs = np.asarray(pairs, dtype=np.int64)
    i, j = pairs[:, 0], pairs[:, 1]
    diff = points[i] - points[j]
    chord2 = -diff[:, 0] ** 2 + np.sum(diff[:, 1:] ** 2, axis=1)
    dist = 2.0 * np.arcsinh(np.sqrt(np.maximum(chord2, 0.0)) / 2.0)
    return np.abs(logf[i] - logf[j]) - dist


def inverse_power_moments(bary, vertices, height, power):
    """First two moments of ``(height / |y|)**power`` for ``y = bary @ vertices``.

    Returns ``(mean, second_moment)``.
    """
    y = np.asarray(bary, dtype=np.float64) @ np.asarray(vertices, dtype=np.float64)
    norm = np.sqrt(y[:, 0] ** 2 - np.sum(y[:, 1:] ** 2, axis=1))
    vals = (height / norm) ** power
    return float(vals.mean()), float(np.mean(vals * vals))
