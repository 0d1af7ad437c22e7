# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the kernels in ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


def jacobi_residual(c):
    cdef const double[:, :, ::1] cc = np.ascontiguousarray(c, dtype=np.float64)
    cdef Py_ssize_t d = cc.shape[0]
    cdef Py_ssize_t i, j, k, l, m
    cdef double s, worst = 0.0, trip
    cdef Py_ssize_t bi = 0, bj = 0, bk = 0
    if d == 0:
        return 0.0, (0, 0, 0)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                trip = 0.0
                for m in range(d):
                    s = 0.0
                    for l in range(d):
                        s += (cc[j, k, l] * cc[i, l, m]
                              + cc[k, i, l] * cc[j, l, m]
                              + cc[i, j, l] * cc[k, l, m])
                    if fabs(s) > trip:
                        trip = fabs(s)
                if trip > worst:
                    worst = trip
                    bi, bj, bk = i, j, k
    return worst, (bi, bj, bk)


def nearest_points(queries, grid):
    cdef const double[:, ::1] q = np.ascontiguousarray(np.atleast_2d(queries), dtype=np.float64)
    cdef const double[:, ::1] g = np.ascontiguousarray(np.atleast_2d(grid), dtype=np.float64)
    cdef Py_ssize_t nq = q.shape[0], ng = g.shape[0], dim = q.shape[1]
    idx_arr = np.empty(nq, dtype=np.int64)
    dist_arr = np.empty(nq, dtype=np.float64)
    cdef cnp.int64_t[::1] idx = idx_arr
    cdef double[::1] dist = dist_arr
    cdef Py_ssize_t a, b, t, best
    cdef double acc, diff, bestd
    for a in range(nq):
        best = 0
        bestd = 1e308
        for b in range(ng):
            acc = 0.0
            for t in range(dim):
                diff = q[a, t] - g[b, t]
                acc += diff * diff
                if acc >= bestd:
                    break
            if acc < bestd:
                bestd = acc
                best = b
        idx[a] = best
        dist[a] = sqrt(bestd)
    return idx_arr, dist_arr
