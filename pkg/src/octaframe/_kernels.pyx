# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: same contract as ``octaframe._kernels_py``.

The monomial tables are copied from ``octaframe._poly`` at import time so
both backends evaluate literally the same polynomial.  Accumulation order
is fixed (nodes and edges in input order), so results are deterministic.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

from ._poly import (
    DEVIATION_COEFFS,
    DEVIATION_EXPONENTS,
    GRADIENT_COEFFS,
    GRADIENT_EXPONENTS,
)

BACKEND_NAME = "cython"

DEF N_MONO = 42
DEF MAX_GRAD = 200

cdef double DEV_C[N_MONO]
cdef int DEV_E[N_MONO][7]
cdef int GRAD_COUNT[7]
cdef double GRAD_C[7][MAX_GRAD]
cdef int GRAD_E[7][MAX_GRAD][7]


def _load_tables():
    cdef int j, m, k
    if DEVIATION_COEFFS.shape[0] != N_MONO:
        raise RuntimeError("unexpected monomial table size")
    for j in range(N_MONO):
        DEV_C[j] = DEVIATION_COEFFS[j]
        for m in range(7):
            DEV_E[j][m] = DEVIATION_EXPONENTS[j, m]
    for m in range(7):
        count = GRADIENT_COEFFS[m].shape[0]
        if count > MAX_GRAD:
            raise RuntimeError("gradient table overflow")
        GRAD_COUNT[m] = count
        for k in range(count):
            GRAD_C[m][k] = GRADIENT_COEFFS[m][k]
            for j in range(7):
                GRAD_E[m][k][j] = GRADIENT_EXPONENTS[m][k, j]


_load_tables()


cdef inline void _fill_powers(const double* a, double p[7][5]) noexcept nogil:
    cdef int i
    for i in range(7):
        p[i][0] = 1.0
        p[i][1] = a[i]
        p[i][2] = p[i][1] * a[i]
        p[i][3] = p[i][2] * a[i]
        p[i][4] = p[i][3] * a[i]


cdef double _deviation(const double* a) noexcept nogil:
    cdef double p[7][5]
    cdef double total = 0.0, term
    cdef int j, i
    _fill_powers(a, p)
    for j in range(N_MONO):
        term = DEV_C[j]
        for i in range(7):
            term = term * p[i][DEV_E[j][i]]
        total += term
    return total


cdef void _deviation_gradient(const double* a, double* out) noexcept nogil:
    cdef double p[7][5]
    cdef double total, term
    cdef int m, k, i
    _fill_powers(a, p)
    for m in range(7):
        total = 0.0
        for k in range(GRAD_COUNT[m]):
            term = GRAD_C[m][k]
            for i in range(7):
                term = term * p[i][GRAD_E[m][k][i]]
            total += term
        out[m] = total


cdef inline double _norm2(const double* a) noexcept nogil:
    cdef double t = 0.0
    cdef int i
    for i in range(7):
        t += a[i] * a[i]
    return t


def deviation_batch(a):
    cdef const double[:, ::1] av = np.ascontiguousarray(np.atleast_2d(a), dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0], r
    out = np.empty(n)
    cdef double[::1] ov = out
    with nogil:
        for r in range(n):
            ov[r] = _deviation(&av[r, 0])
    return out


def deviation_gradient_batch(a):
    cdef const double[:, ::1] av = np.ascontiguousarray(np.atleast_2d(a), dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0], r
    out = np.empty((n, 7))
    cdef double[:, ::1] ov = out
    with nogil:
        for r in range(n):
            _deviation_gradient(&av[r, 0], &ov[r, 0])
    return out


def penalty_batch(a, double w1, double w2):
    cdef const double[:, ::1] av = np.ascontiguousarray(np.atleast_2d(a), dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0], r
    cdef double scale
    out = np.empty(n)
    cdef double[::1] ov = out
    with nogil:
        for r in range(n):
            scale = _norm2(&av[r, 0]) - 1.0
            ov[r] = w1 * scale * scale + w2 * _deviation(&av[r, 0])
    return out


def penalty_gradient_batch(a, double w1, double w2):
    cdef const double[:, ::1] av = np.ascontiguousarray(np.atleast_2d(a), dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0], r
    cdef Py_ssize_t i
    cdef double scale
    out = np.empty((n, 7))
    cdef double[:, ::1] ov = out
    with nogil:
        for r in range(n):
            _deviation_gradient(&av[r, 0], &ov[r, 0])
            scale = _norm2(&av[r, 0]) - 1.0
            for i in range(7):
                ov[r, i] = 4.0 * w1 * scale * av[r, i] + w2 * ov[r, i]
    return out


def smoothness_batch(a, b):
    cdef const double[:, ::1] av = np.ascontiguousarray(np.atleast_2d(a), dtype=np.float64)
    cdef const double[:, ::1] bv = np.ascontiguousarray(np.atleast_2d(b), dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0], r, i
    cdef double d2, s2, d, s
    out = np.empty(n)
    cdef double[::1] ov = out
    with nogil:
        for r in range(n):
            d2 = 0.0
            s2 = 0.0
            for i in range(7):
                d = av[r, i] - bv[r, i]
                s = av[r, i] + bv[r, i]
                d2 += d * d
                s2 += s * s
            ov[r] = d2 * s2
    return out


def field_energy(values, edges, double w1, double w2):
    cdef const double[:, ::1] vv = np.ascontiguousarray(values, dtype=np.float64)
    cdef const long long[:, ::1] ev = np.ascontiguousarray(edges, dtype=np.int64)
    cdef Py_ssize_t n = vv.shape[0], ne = ev.shape[0], r, i
    cdef long long p, q
    cdef double total = 0.0, d2, s2, d, s, scale
    with nogil:
        for r in range(ne):
            p = ev[r, 0]
            q = ev[r, 1]
            d2 = 0.0
            s2 = 0.0
            for i in range(7):
                d = vv[p, i] - vv[q, i]
                s = vv[p, i] + vv[q, i]
                d2 += d * d
                s2 += s * s
            total += d2 * s2
        for r in range(n):
            scale = _norm2(&vv[r, 0]) - 1.0
            total += w1 * scale * scale + w2 * _deviation(&vv[r, 0])
    return total


def field_gradient(values, edges, pinned, double w1, double w2):
    cdef const double[:, ::1] vv = np.ascontiguousarray(values, dtype=np.float64)
    cdef const long long[:, ::1] ev = np.ascontiguousarray(edges, dtype=np.int64)
    cdef const cnp.uint8_t[::1] pv = np.ascontiguousarray(pinned, dtype=np.uint8)
    cdef Py_ssize_t n = vv.shape[0], ne = ev.shape[0], r, i
    cdef long long p, q
    cdef double d2, s2, d, s, scale
    out = np.empty((n, 7))
    cdef double[:, ::1] ov = out
    with nogil:
        for r in range(n):
            _deviation_gradient(&vv[r, 0], &ov[r, 0])
            scale = _norm2(&vv[r, 0]) - 1.0
            for i in range(7):
                ov[r, i] = 4.0 * w1 * scale * vv[r, i] + w2 * ov[r, i]
        for r in range(ne):
            p = ev[r, 0]
            q = ev[r, 1]
            d2 = 0.0
            s2 = 0.0
            for i in range(7):
                d = vv[p, i] - vv[q, i]
                s = vv[p, i] + vv[q, i]
                d2 += d * d
                s2 += s * s
            for i in range(7):
                d = vv[p, i] - vv[q, i]
                s = vv[p, i] + vv[q, i]
                ov[p, i] += 2.0 * s2 * d + 2.0 * d2 * s
                ov[q, i] += -2.0 * s2 * d + 2.0 * d2 * s
        for r in range(n):
            if pv[r]:
                for i in range(7):
                    ov[r, i] = 0.0
    return out
