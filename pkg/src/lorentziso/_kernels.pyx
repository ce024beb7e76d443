# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_kernels_py`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, asinh, pow

cnp.import_array()

BACKEND = "cython"


cdef Py_ssize_t _pow2(Py_ssize_t m) nogil:
    cdef Py_ssize_t size = 1
    while size < m:
        size *= 2
    return size


cdef double _tree_reduce(double[::1] buf, Py_ssize_t size) nogil:
    # same pairing as buf[0::2] + buf[1::2], repeated
    cdef Py_ssize_t half, i
    while size > 1:
        half = size // 2
        for i in range(half):
            buf[i] = buf[2 * i] + buf[2 * i + 1]
        size = half
    return buf[0]


def pairwise_sum(x):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t m = xv.shape[0]
    if m == 0:
        return 0.0
    cdef Py_ssize_t size = _pow2(m)
    cdef double[::1] buf = np.zeros(size, dtype=np.float64)
    cdef Py_ssize_t i
    for i in range(m):
        buf[i] = xv[i]
    return float(_tree_reduce(buf, size))


def l1_deviation_scan(values, weights, centers):
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(centers, dtype=np.float64)
    cdef Py_ssize_t m = v.shape[0], k = c.shape[0]
    out = np.zeros(k, dtype=np.float64)
    cdef double[::1] o = out
    if m == 0:
        return out
    cdef Py_ssize_t size = _pow2(m)
    cdef double[::1] buf = np.zeros(size, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double cj
    with nogil:
        for j in range(k):
            cj = c[j]
            for i in range(m):
                buf[i] = w[i] * fabs(v[i] - cj)
            for i in range(m, size):
                buf[i] = 0.0
            o[j] = _tree_reduce(buf, size)
    return out


def lipschitz_excess(points, logf, pairs):
    cdef const double[:, ::1] p = np.ascontiguousarray(points, dtype=np.float64)
    cdef const double[::1] lf = np.ascontiguousarray(logf, dtype=np.float64)
    cdef long long[:, ::1] pr = np.ascontiguousarray(pairs, dtype=np.int64)
    cdef Py_ssize_t k = pr.shape[0], dim = p.shape[1]
    out = np.empty(k, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t q, a, i, j
    cdef double chord2, d
    with nogil:
        for q in range(k):
            i = pr[q, 0]
            j = pr[q, 1]
            d = p[i, 0] - p[j, 0]
            chord2 = -d * d
            for a in range(1, dim):
                d = p[i, a] - p[j, a]
                chord2 += d * d
            if chord2 < 0.0:
                chord2 = 0.0
            o[q] = fabs(lf[i] - lf[j]) - 2.0 * asinh(sqrt(chord2) / 2.0)
    return out


def inverse_power_moments(bary, vertices, double height, double power):
    cdef const double[:, ::1] b = np.ascontiguousarray(bary, dtype=np.float64)
    cdef const double[:, ::1] v = np.ascontiguousarray(vertices, dtype=np.float64)
    cdef Py_ssize_t m = b.shape[0], nv = b.shape[1], dim = v.shape[1]
    cdef Py_ssize_t s, a, c
    cdef double y, y0, sq, val, acc1 = 0.0, acc2 = 0.0
    with nogil:
        for s in range(m):
            y0 = 0.0
            for c in range(nv):
                y0 += b[s, c] * v[c, 0]
            sq = y0 * y0
            for a in range(1, dim):
                y = 0.0
                for c in range(nv):
                    y += b[s, c] * v[c, a]
                sq -= y * y
            val = pow(height / sqrt(sq), power)
            acc1 += val
            acc2 += val * val
    return acc1 / m, acc2 / m
