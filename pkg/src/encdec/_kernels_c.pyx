# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_kernels_py``.

Signatures and results match the numpy versions; the bump kernel exploits
compact support and only exponentiates active centers.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, floor, fabs, rint, INFINITY

cnp.import_array()

cdef double SNAP_TOL = 1e-10


def pou_weights(points, centers, double epsilon):
    cdef const double[:, ::1] P = np.ascontiguousarray(points, dtype=np.float64)
    cdef const double[:, ::1] C = np.ascontiguousarray(centers, dtype=np.float64)
    cdef Py_ssize_t m = P.shape[0], k = C.shape[0], dim = P.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((m, k))
    cdef double[:, ::1] W = out
    cdef double eps2 = epsilon * epsilon
    cdef double d2, diff, smax, s, total
    cdef Py_ssize_t j, i, a
    cdef bint any_active
    for j in range(m):
        smax = -INFINITY
        any_active = False
        for i in range(k):
            d2 = 0.0
            for a in range(dim):
                diff = P[j, a] - C[i, a]
                d2 += diff * diff
            if d2 < eps2:
                s = -1.0 / (eps2 - d2)
                W[j, i] = s
                any_active = True
                if s > smax:
                    smax = s
            else:
                W[j, i] = -INFINITY
        if not any_active:
            return np.zeros((m, k)), j
        total = 0.0
        for i in range(k):
            if W[j, i] == -INFINITY:
                W[j, i] = 0.0
            else:
                W[j, i] = exp(W[j, i] - smax)
                total += W[j, i]
        for i in range(k):
            W[j, i] = W[j, i] / total
    return out, -1


def interp_stencil(lower, upper, shape, points):
    cdef const double[:, ::1] P = np.ascontiguousarray(np.atleast_2d(points), dtype=np.float64)
    cdef Py_ssize_t m = P.shape[0], dim = P.shape[1]
    cdef Py_ssize_t taps = 2 if dim == 1 else 4
    idx_arr = np.zeros((m, taps), dtype=np.int64)
    w_arr = np.zeros((m, taps))
    cdef cnp.int64_t[:, ::1] idx = idx_arr
    cdef double[:, ::1] w = w_arr
    cdef double lo0 = lower[0], hi0 = upper[0]
    cdef double lo1 = lower[1] if dim > 1 else 0.0
    cdef double hi1 = upper[1] if dim > 1 else 1.0
    cdef Py_ssize_t n0 = shape[0]
    cdef Py_ssize_t n1 = shape[1] if dim > 1 else 1
    cdef Py_ssize_t j, i0, i1
    cdef double u0, u1, r, t0, t1
    for j in range(m):
        u0 = (P[j, 0] - lo0) / (hi0 - lo0) * (n0 - 1)
        r = rint(u0)
        if fabs(u0 - r) < SNAP_TOL:
            u0 = r
        i0 = <Py_ssize_t>floor(u0)
        if i0 < 0:
            i0 = 0
        if i0 > n0 - 2:
            i0 = n0 - 2
        t0 = u0 - i0
        if dim == 1:
            idx[j, 0] = i0
            idx[j, 1] = i0 + 1
            w[j, 0] = 1.0 - t0
            w[j, 1] = t0
            continue
        u1 = (P[j, 1] - lo1) / (hi1 - lo1) * (n1 - 1)
        r = rint(u1)
        if fabs(u1 - r) < SNAP_TOL:
            u1 = r
        i1 = <Py_ssize_t>floor(u1)
        if i1 < 0:
            i1 = 0
        if i1 > n1 - 2:
            i1 = n1 - 2
        t1 = u1 - i1
        idx[j, 0] = i0 * n1 + i1
        idx[j, 1] = i0 * n1 + i1 + 1
        idx[j, 2] = (i0 + 1) * n1 + i1
        idx[j, 3] = (i0 + 1) * n1 + i1 + 1
        w[j, 0] = (1 - t0) * (1 - t1)
        w[j, 1] = (1 - t0) * t1
        w[j, 2] = t0 * (1 - t1)
        w[j, 3] = t0 * t1
    return idx_arr, w_arr


def interp_eval(flat_values, idx, w):
    cdef const double[::1] v = np.ascontiguousarray(flat_values, dtype=np.float64)
    cdef const cnp.int64_t[:, ::1] I = np.ascontiguousarray(idx, dtype=np.int64)
    cdef const double[:, ::1] Wt = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t m = I.shape[0], taps = I.shape[1], j, c
    out_arr = np.zeros(m)
    cdef double[::1] out = out_arr
    for c in range(taps):
        for j in range(m):
            if Wt[j, c] != 0.0:
                out[j] += Wt[j, c] * v[I[j, c]]
    return out_arr


def cumulative_trapezoid(rows, double h):
    cdef const double[:, ::1] R = np.ascontiguousarray(np.atleast_2d(rows), dtype=np.float64)
    cdef Py_ssize_t nr = R.shape[0], n = R.shape[1], i, j
    out_arr = np.zeros((nr, n))
    cdef double[:, ::1] out = out_arr
    cdef double acc
    for i in range(nr):
        acc = 0.0
        for j in range(1, n):
            acc += 0.5 * h * (R[i, j] + R[i, j - 1])
            out[i, j] = acc
    return out_arr


def monomial_design(x, exponents):
    cdef const double[:, ::1] X = np.ascontiguousarray(np.atleast_2d(x), dtype=np.float64)
    cdef const cnp.int64_t[:, ::1] E = np.ascontiguousarray(exponents, dtype=np.int64)
    cdef Py_ssize_t m = X.shape[0], a = X.shape[1], M = E.shape[0]
    cdef Py_ssize_t j, i, k, e, p
    out_arr = np.ones((m, M))
    cdef double[:, ::1] out = out_arr
    cdef double val
    for j in range(m):
        for i in range(M):
            val = 1.0
            for k in range(a):
                e = E[i, k]
                for p in range(e):
                    val *= X[j, k]
            out[j, i] = val
    return out_arr
