# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled divider kernel over int64 raw values.

Mirrors ``_kernels_py.divide_raw``.  The caller guarantees that no product
exceeds 62 bits; signed right shifts are arithmetic (floor).
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


cdef inline int bit_length(int64_t v) nogil:
    cdef int n = 0
    while v:
        v >>= 1
        n += 1
    return n


def divide_raw(const int64_t[::1] x_raw, const int64_t[::1] w_raw, int degree,
               int x_frac, int w_frac, int frac, int out_frac,
               const int64_t[::1] consts):
    cdef Py_ssize_t n = x_raw.shape[0], i
    result_arr = np.empty(n, dtype=np.int64)
    z_arr = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] result = result_arr
    cdef int64_t[::1] zs = z_arr
    cdef int64_t k0 = consts[0], k1 = consts[1], k2 = consts[2]
    cdef int64_t one = (<int64_t>1) << frac
    cdef int64_t three = (<int64_t>3) << frac
    cdef int64_t one_half = (<int64_t>3) << (frac - 1)
    cdef int out_shift = frac - out_frac
    cdef int64_t half_lsb = ((<int64_t>1) << (out_shift - 1)) if out_shift > 0 else 0
    cdef int w_up = frac - w_frac
    cdef int64_t x, m, s, a, a2, half_a, q1, q2, corr, p, w, ws, r
    cdef int z, sh
    with nogil:
        for i in range(n):
            x = x_raw[i]
            z = bit_length(x) - 1 - x_frac
            sh = frac - x_frac - z
            m = (x << sh) if sh >= 0 else (x >> -sh)
            if degree == 2:
                s = m - one_half
                corr = ((k0 * ((s * s) >> frac)) >> frac) + k1
            else:
                a = m - one
                a2 = (a * a) >> frac
                half_a = a >> 1
                q1 = k1 - ((a << 1) + half_a) + a2
                q2 = k2 + half_a + a2
                corr = (k0 * ((q1 * q2) >> frac)) >> frac
            p = (corr * (three - m)) >> frac
            w = w_raw[i]
            ws = ((w << w_up) if w_up >= 0 else (w >> -w_up)) >> (z + 1)
            r = (p * ws) >> frac
            result[i] = (r + half_lsb) >> out_shift
            zs[i] = z
    return result_arr, z_arr
