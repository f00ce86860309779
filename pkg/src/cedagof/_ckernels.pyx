# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Ward.D2 merge loop. Mirrors ``_pykernels.ward_linkage`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, INFINITY

cnp.import_array()


cdef inline void _row_nn(double[:, ::1] d2, Py_ssize_t i, cnp.int64_t[::1] ids,
                         unsigned char[::1] active, Py_ssize_t M,
                         cnp.int64_t* out_nn, double* out_d) noexcept nogil:
    cdef Py_ssize_t k, best_k = -1
    cdef double best = INFINITY, v
    for k in range(M):
        if k == i or not active[k]:
            continue
        v = d2[i, k]
        if v < best or (v == best and best_k >= 0 and ids[k] < ids[best_k]):
            best = v
            best_k = k
        elif best_k < 0 and v == best:
            best_k = k
    out_nn[0] = best_k
    out_d[0] = best


def ward_linkage(sqdist):
    """Agglomerate with Ward.D2 given a square matrix of squared distances."""
    cdef double[:, ::1] d2 = np.array(sqdist, dtype=np.float64, copy=True, order="C")
    cdef Py_ssize_t M = d2.shape[0]
    left_a = np.empty(M - 1, dtype=np.int64)
    right_a = np.empty(M - 1, dtype=np.int64)
    height_a = np.empty(M - 1, dtype=np.float64)
    size_a = np.empty(M - 1, dtype=np.int64)
    cdef cnp.int64_t[::1] left = left_a
    cdef cnp.int64_t[::1] right = right_a
    cdef double[::1] height = height_a
    cdef cnp.int64_t[::1] size = size_a

    ids_a = np.arange(M, dtype=np.int64)
    cdef cnp.int64_t[::1] ids = ids_a
    cdef double[::1] counts = np.ones(M, dtype=np.float64)
    cdef unsigned char[::1] active = np.ones(M, dtype=np.uint8)
    cdef cnp.int64_t[::1] nn = np.empty(M, dtype=np.int64)
    cdef double[::1] nnd = np.empty(M, dtype=np.float64)

    cdef Py_ssize_t i, j, k, s, t, step, tmp
    cdef cnp.int64_t lo, hi, best_lo, best_hi, a, b
    cdef double dmin, ni, nj, nk, dij, v
    cdef int have

    with nogil:
        for i in range(M):
            d2[i, i] = INFINITY
        for i in range(M):
            _row_nn(d2, i, ids, active, M, &nn[i], &nnd[i])

        for step in range(M - 1):
            # global minimum over active slots, ties by (smaller id, larger id)
            have = 0
            i = -1
            best_lo = 0
            best_hi = 0
            dmin = INFINITY
            for k in range(M):
                if not active[k]:
                    continue
                a = ids[k]
                b = ids[nn[k]]
                lo = a if a < b else b
                hi = b if a < b else a
                if (not have) or nnd[k] < dmin or (nnd[k] == dmin and (lo < best_lo or (lo == best_lo and hi < best_hi))):
                    have = 1
                    dmin = nnd[k]
                    best_lo = lo
                    best_hi = hi
                    i = k
            j = nn[i]
            if ids[j] < ids[i]:
                tmp = i
                i = j
                j = tmp
            ni = counts[i]
            nj = counts[j]
            dij = d2[i, j]

            left[step] = ids[i]
            right[step] = ids[j]
            height[step] = sqrt(dij)
            size[step] = <cnp.int64_t>(ni + nj)

            s = i if i < j else j
            t = j if i < j else i
            for k in range(M):
                if not active[k] or k == i or k == j:
                    continue
                nk = counts[k]
                v = ((ni + nk) * d2[i, k] + (nj + nk) * d2[j, k] - nk * dij) / (ni + nj + nk)
                if v < 0.0:
                    v = 0.0
                d2[s, k] = v
                d2[k, s] = v
            for k in range(M):
                d2[t, k] = INFINITY
                d2[k, t] = INFINITY
            ids[s] = M + step
            counts[s] = ni + nj
            active[t] = 0

            for k in range(M):
                if not active[k] or k == s:
                    continue
                if nn[k] == i or nn[k] == j:
                    _row_nn(d2, k, ids, active, M, &nn[k], &nnd[k])
                elif d2[k, s] < nnd[k]:
                    nn[k] = s
                    nnd[k] = d2[k, s]
            _row_nn(d2, s, ids, active, M, &nn[s], &nnd[s])

    return left_a, right_a, height_a, size_a
