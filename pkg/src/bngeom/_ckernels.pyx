# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batched bitnet kernels (see ``_pykernels`` for the contract)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log
from libc.stdlib cimport malloc, free
from libc.string cimport memset

cnp.import_array()


cdef double _point(const double[::1] th, const signed char[:, ::1] bits,
                   const long long[:, ::1] slots, int want_ricci,
                   double* f, double* pi, double* D, double* h, double* dd,
                   double* hlp_out) noexcept nogil:
    cdef Py_ssize_t A = bits.shape[0]
    cdef Py_ssize_t n = bits.shape[1]
    cdef Py_ssize_t d = th.shape[0]
    cdef Py_ssize_t a, k, kk, i, j, m
    cdef double p, loo, t, u, acc, cross, tij, sgn
    memset(pi, 0, d * sizeof(double))
    if want_ricci:
        memset(D, 0, d * d * sizeof(double))
    for a in range(A):
        p = 1.0
        for k in range(n):
            t = th[slots[a, k]]
            f[k] = t if bits[a, k] else 1.0 - t
            p *= f[k]
        for k in range(n):
            if not bits[a, k]:
                continue
            loo = p / f[k]
            pi[slots[a, k]] += loo
            if want_ricci:
                for kk in range(n):
                    if kk == k:
                        continue
                    sgn = 1.0 if bits[a, kk] else -1.0
                    D[slots[a, kk] * d + slots[a, k]] += sgn * loo / f[kk]
    acc = 0.0
    for i in range(d):
        acc += log(pi[i])
    hlp_out[0] = 0.5 * acc
    if not want_ricci or d < 2:
        return 0.0
    for i in range(d):
        u = th[i] * (1.0 - th[i])
        h[i] = pi[i] / u
        dd[i] = pi[i] * (2.0 * th[i] - 1.0) / (u * u)
        for m in range(d):
            D[m * d + i] /= u
        D[i * d + i] = dd[i]
    acc = 0.0
    for i in range(d):
        for j in range(d):
            if i == j:
                continue
            cross = 0.0
            for m in range(d):
                cross += D[m * d + i] * D[m * d + j] / h[m]
            tij = (D[j * d + i] * D[j * d + i] / (4 * h[i])
                   + D[i * d + j] * D[i * d + j] / (4 * h[j])
                   + D[i * d + j] * dd[i] / (2 * h[i])
                   + D[j * d + i] * dd[j] / (2 * h[j])
                   - cross / 4)
            acc += tij / (h[i] * h[j])
    return acc


def bitnet_batch(theta, bits, slots, bint want_ricci=True):
    cdef double[:, ::1] th = np.ascontiguousarray(theta, dtype=np.float64)
    cdef const signed char[:, ::1] b = np.ascontiguousarray(bits, dtype=np.int8)
    cdef const long long[:, ::1] s = np.ascontiguousarray(slots, dtype=np.int64)
    cdef Py_ssize_t B = th.shape[0]
    cdef Py_ssize_t d = th.shape[1]
    cdef Py_ssize_t n = b.shape[1]
    ric_arr = np.zeros(B)
    hlp_arr = np.zeros(B)
    cdef double[::1] ric = ric_arr
    cdef double[::1] hlp = hlp_arr
    cdef double* f = <double*> malloc(max(n, 1) * sizeof(double))
    cdef double* pi = <double*> malloc(d * sizeof(double))
    cdef double* D = <double*> malloc(d * d * sizeof(double))
    cdef double* h = <double*> malloc(d * sizeof(double))
    cdef double* dd = <double*> malloc(d * sizeof(double))
    cdef Py_ssize_t r
    if f == NULL or pi == NULL or D == NULL or h == NULL or dd == NULL:
        free(f); free(pi); free(D); free(h); free(dd)
        raise MemoryError()
    try:
        with nogil:
            for r in range(B):
                ric[r] = _point(th[r], b, s, want_ricci, f, pi, D, h, dd, &hlp[r])
    finally:
        free(f); free(pi); free(D); free(h); free(dd)
    return ric_arr, hlp_arr
