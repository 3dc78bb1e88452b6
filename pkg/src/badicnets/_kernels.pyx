# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for block digit generation and interval counting.

Mirrors _kernels_py exactly; selected automatically by _backend when built.
"""

import array

from libc.stdlib cimport free, malloc

IMPLEMENTATION = "compiled"


def gen_block_digits(truncs, long long base, int ndig, int s, int m,
                     const unsigned char[::1] row_vals, const int[::1] row_off,
                     const unsigned char[::1] psi_flat, const unsigned char[::1] lam_flat,
                     const unsigned char[::1] add_flat, const unsigned char[::1] mul_flat,
                     int q):
    cdef const unsigned long long[::1] tv = truncs
    cdef Py_ssize_t count = tv.shape[0]
    cdef int sm = s * m
    cdef bytearray out_ba = bytearray(count * sm)
    cdef unsigned char[::1] out = out_ba
    cdef unsigned long long v
    cdef unsigned long long ubase = <unsigned long long> base
    cdef int r, ij, rr, start, end, acc, e
    cdef Py_ssize_t t, o
    cdef unsigned char* pd = <unsigned char*> malloc(ndig if ndig > 0 else 1)
    if pd == NULL:
        raise MemoryError()
    try:
        for t in range(count):
            v = tv[t]
            for r in range(ndig):
                pd[r] = psi_flat[r * q + <int>(v % ubase)]
                v = v / ubase
            o = t * sm
            for ij in range(sm):
                start = row_off[ij]
                end = row_off[ij + 1]
                acc = 0
                for rr in range(end - start):
                    e = row_vals[start + rr]
                    if e:
                        acc = add_flat[acc * q + mul_flat[e * q + pd[rr]]]
                out[o + ij] = lam_flat[ij * q + acc]
    finally:
        free(pd)
    return bytes(out_ba)


def composition_counts(const unsigned char[::1] digits, Py_ssize_t count,
                       int s, int m, d, long long base):
    cdef int total = 0
    cdef int i, j, di
    cdef int[16] dv
    if len(d) > 16:
        raise ValueError("at most 16 coordinates supported")
    for i in range(len(d)):
        dv[i] = d[i]
        total += dv[i]
    cdef Py_ssize_t nkeys = 1
    for i in range(total):
        nkeys *= base
    arr = array.array("q", bytes(8 * nkeys))
    cdef long long[::1] cv = arr
    cdef int sm = s * m
    cdef Py_ssize_t t, o
    cdef long long key
    for t in range(count):
        o = t * sm
        key = 0
        for i in range(s):
            di = dv[i]
            for j in range(di):
                key = key * base + digits[o + i * m + j]
        cv[key] += 1
    return arr.tolist()
