# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled float iteration kernels; same contract as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


cdef inline Py_ssize_t _find(const double[::1] lo, double x) noexcept nogil:
    # last index with lo[i] <= x
    cdef Py_ssize_t a = 0, b = lo.shape[0], m
    while b - a > 1:
        m = (a + b) >> 1
        if lo[m] <= x:
            a = m
        else:
            b = m
    return a


cdef inline bint _near(const double[::1] disc, double x, double eps) noexcept nogil:
    cdef Py_ssize_t n = disc.shape[0]
    cdef Py_ssize_t k = _find(disc, x)
    if fabs(x - disc[k]) < eps:
        return True
    if k + 1 < n and fabs(disc[k + 1] - x) < eps:
        return True
    return False


def run_batch(x0, long steps, long record_from, lo, sh, disc, double s, double eps):
    cdef double[::1] xs = np.ascontiguousarray(x0, dtype=np.float64)
    cdef const double[::1] plo = np.ascontiguousarray(lo, dtype=np.float64)
    cdef const double[::1] psh = np.ascontiguousarray(sh, dtype=np.float64)
    cdef const double[::1] pd = np.ascontiguousarray(disc, dtype=np.float64)
    cdef Py_ssize_t n = xs.shape[0], j
    cdef long width = steps - record_from if steps > record_from else 0
    out_arr = np.empty((n, width), dtype=np.float64)
    ok_arr = np.ones(n, dtype=np.uint8)
    cdef double[:, ::1] out = out_arr
    cdef unsigned char[::1] ok = ok_arr
    cdef long t
    cdef double x
    with nogil:
        for j in range(n):
            x = xs[j]
            for t in range(steps):
                if ok[j] and _near(pd, x, eps):
                    ok[j] = 0
                x = x + psh[_find(plo, x)]
                if x >= s:
                    x -= s
                elif x < 0.0:
                    x += s
                if t >= record_from:
                    out[j, t - record_from] = x
    return out_arr, ok_arr.astype(bool)


def return_times(x0, long cap, lo, sh, double s, slo, shi):
    cdef double[::1] xs = np.ascontiguousarray(x0, dtype=np.float64)
    cdef const double[::1] plo = np.ascontiguousarray(lo, dtype=np.float64)
    cdef const double[::1] psh = np.ascontiguousarray(sh, dtype=np.float64)
    cdef const double[::1] a = np.ascontiguousarray(slo, dtype=np.float64)
    cdef const double[::1] b = np.ascontiguousarray(shi, dtype=np.float64)
    cdef Py_ssize_t n = xs.shape[0], j, k
    times_arr = np.full(n, -1, dtype=np.int64)
    cdef long long[::1] times = times_arr
    cdef long t
    cdef double x
    with nogil:
        for j in range(n):
            x = xs[j]
            for t in range(1, cap + 1):
                x = x + psh[_find(plo, x)]
                if x >= s:
                    x -= s
                elif x < 0.0:
                    x += s
                if x >= a[0]:
                    k = _find(a, x)
                    if x < b[k]:
                        times[j] = t
                        break
    return times_arr
