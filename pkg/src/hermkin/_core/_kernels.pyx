# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-cell hot kernels: the triangular frame-change recursion
and the sparse quadratic collision contraction."""

import numpy as np

cimport numpy as cnp

BACKEND = "compiled"


def change_frame_core(
    double[::1] values,
    long[:, ::1] shift_down,
    long[:, ::1] shift_down2,
    du,
    double dtheta,
    int max_degree,
    double[::1] out,
):
    cdef Py_ssize_t n = values.shape[0]
    cdef double du0 = du[0], du1 = du[1], du2 = du[2]
    cdef double half_dtheta = 0.5 * dtheta
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cur_arr = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] nxt_arr = np.empty(n)
    cdef double[::1] cur = cur_arr
    cdef double[::1] nxt = nxt_arr
    cdef double[::1] tmp
    cdef Py_ssize_t i, k, d
    cdef long j, j2
    cdef double acc, dud

    for i in range(n):
        out[i] = values[i]
        cur[i] = values[i]
    for k in range(1, max_degree + 1):
        for i in range(n):
            acc = 0.0
            for d in range(3):
                dud = du0 if d == 0 else (du1 if d == 1 else du2)
                if dud != 0.0:
                    j = shift_down[d, i]
                    if j >= 0:
                        acc += dud * cur[j]
                if half_dtheta != 0.0:
                    j2 = shift_down2[d, i]
                    if j2 >= 0:
                        acc += half_dtheta * cur[j2]
            nxt[i] = acc / k
        for i in range(n):
            out[i] += nxt[i]
        tmp = cur
        cur = nxt
        nxt = tmp
    return np.asarray(out)


def quadratic_contract(
    long[::1] row_ptr,
    long[::1] beta_idx,
    long[::1] gamma_idx,
    double[::1] values,
    double[::1] h,
    double[::1] out,
):
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t a, e
    cdef double acc
    for a in range(n):
        acc = 0.0
        for e in range(row_ptr[a], row_ptr[a + 1]):
            acc += values[e] * h[beta_idx[e]] * h[gamma_idx[e]]
        out[a] = acc
    return np.asarray(out)
