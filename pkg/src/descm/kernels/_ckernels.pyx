# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled assembly kernel; same arithmetic, in the same order, as _pykernels."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double PI2_3 = np.pi * np.pi / 3.0


def assemble(vtilde, s, double h):
    cdef const double[::1] vt = np.ascontiguousarray(vtilde, dtype=np.float64)
    cdef const double[::1] sv = np.ascontiguousarray(s, dtype=np.float64)
    cdef Py_ssize_t size = vt.shape[0]
    cdef Py_ssize_t j, k, m
    cdef double inv_h2 = 1.0 / (h * h)
    cdef double mm, sign, sj, val
    H_arr = np.empty((size, size), dtype=np.float64)
    A_arr = np.empty((size, size), dtype=np.float64)
    col_arr = np.empty(size, dtype=np.float64)
    cdef double[:, ::1] H = H_arr
    cdef double[:, ::1] A = A_arr
    cdef double[::1] col = col_arr
    with nogil:
        # Toeplitz generator: H[j, k] = col[|j - k|] off the diagonal
        col[0] = PI2_3 * inv_h2
        for m in range(1, size):
            mm = <double>m
            sign = 1.0 if m % 2 == 0 else -1.0
            col[m] = (2.0 * sign / (mm * mm)) * inv_h2
        # row-major fill; each entry depends on |j - k| and s[j]*s[k] only,
        # so H and A are exactly symmetric
        for j in range(size):
            sj = sv[j]
            for k in range(j):
                val = col[j - k]
                H[j, k] = val
                A[j, k] = val * (sj * sv[k])
            val = col[0] + vt[j]
            H[j, j] = val
            A[j, j] = val * (sj * sj)
            for k in range(j + 1, size):
                val = col[k - j]
                H[j, k] = val
                A[j, k] = val * (sj * sv[k])
    return H_arr, A_arr
