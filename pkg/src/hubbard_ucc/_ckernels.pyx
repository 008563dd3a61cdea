# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for factor application and energy evaluation."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def apply_rotations(psi, long long[:, ::1] partners, double[:, ::1] weights,
                    double[::1] cosines, double[::1] sines):
    cdef Py_ssize_t nf = partners.shape[0], n = partners.shape[1]
    cdef Py_ssize_t f, i
    cdef long long p
    cdef double c, s
    out_arr = np.array(psi, dtype=np.complex128, copy=True)
    prev_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef double complex[::1] prev = prev_arr
    for f in range(nf):
        c = cosines[f]
        s = sines[f]
        for i in range(n):
            prev[i] = out[i]
        for i in range(n):
            p = partners[f, i]
            if p >= 0:
                out[i] = c * prev[i] + s * weights[f, i] * prev[p]
    return out_arr


def expectation(double complex[:, ::1] h, double complex[::1] psi):
    cdef Py_ssize_t n = psi.shape[0], i, j
    cdef double complex acc, total = 0
    for i in range(n):
        acc = 0
        for j in range(n):
            acc = acc + h[i, j] * psi[j]
        total = total + psi[i].conjugate() * acc
    return total.real
