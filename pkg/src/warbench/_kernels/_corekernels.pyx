# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot path-propagation loops.

Keep the arithmetic order in lockstep with ``fallback.py`` (built with
-ffp-contract=off so the compiler cannot fuse multiply-adds): the real
kernel matches the numpy twin bitwise, the complex one to within an ulp.

Large batches run step-major with the path index innermost (one upfront
transpose of the shock array) so the compiler vectorizes across paths;
small batches stay path-major to skip the transpose.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

# Below this many path-steps the transpose costs more than it saves.
DEF SMALL_BATCH = 262144


def propagate_terminal(double b0, double r0, double r_rate, double b_rate,
                       double pi, double dt, shocks):
    """Terminal (B, R) of clamped paths under given shock realizations."""
    z_arr = np.asarray(shocks, dtype=np.uint8)
    cdef Py_ssize_t m = z_arr.shape[0]
    cdef Py_ssize_t n = z_arr.shape[1]
    out_b_arr = np.full(m, b0, dtype=np.float64)
    out_r_arr = np.full(m, r0, dtype=np.float64)
    cdef double[::1] B = out_b_arr
    cdef double[::1] R = out_r_arr
    cdef const unsigned char[:, :, ::1] zp
    cdef const unsigned char[:, :, ::1] zs
    cdef double rdt = r_rate * dt
    cdef double bdt = pi * b_rate * dt
    cdef double b, r, nb, nr
    cdef Py_ssize_t i, k
    if m * n <= SMALL_BATCH:
        zp = np.ascontiguousarray(z_arr)
        for i in range(m):
            b = b0
            r = r0
            for k in range(n):
                nb = b - rdt * (zp[i, k, 1] * r)
                nr = r - bdt * (zp[i, k, 0] * b)
                b = nb if nb > 0.0 else 0.0
                r = nr if nr > 0.0 else 0.0
            B[i] = b
            R[i] = r
    else:
        zs = np.ascontiguousarray(z_arr.transpose(1, 0, 2))
        for k in range(n):
            for i in range(m):
                b = B[i]
                r = R[i]
                nb = b - rdt * (zs[k, i, 1] * r)
                nr = r - bdt * (zs[k, i, 0] * b)
                B[i] = nb if nb > 0.0 else 0.0
                R[i] = nr if nr > 0.0 else 0.0
    return out_b_arr, out_r_arr


def propagate_terminal_cstep(double b0, double r0, double r_rate, double b_rate,
                             double pi, double h, double dt, shocks):
    """Unclamped complex-step propagation at allocation ``pi + i*h``."""
    z_arr = np.asarray(shocks, dtype=np.uint8)
    cdef Py_ssize_t m = z_arr.shape[0]
    cdef Py_ssize_t n = z_arr.shape[1]
    out_b_arr = np.full(m, b0, dtype=np.complex128)
    out_r_arr = np.full(m, r0, dtype=np.complex128)
    flag_arr = np.zeros(m, dtype=bool)
    cdef double complex[::1] B = out_b_arr
    cdef double complex[::1] R = out_r_arr
    cdef cnp.uint8_t[::1] flag = flag_arr.view(np.uint8)
    cdef const unsigned char[:, :, ::1] zp
    cdef const unsigned char[:, :, ::1] zs
    cdef double rdt = r_rate * dt
    cdef double complex bdt = (pi + 1j * h) * (b_rate * dt)
    cdef double complex b, r, nb, nr
    cdef cnp.uint8_t hit
    cdef Py_ssize_t i, k
    if m * n <= SMALL_BATCH:
        zp = np.ascontiguousarray(z_arr)
        for i in range(m):
            b = b0
            r = r0
            hit = 0
            for k in range(n):
                nb = b - rdt * (zp[i, k, 1] * r)
                nr = r - bdt * (zp[i, k, 0] * b)
                if nb.real < 0.0 or nr.real < 0.0:
                    hit = 1
                b = nb
                r = nr
            B[i] = b
            R[i] = r
            flag[i] = hit
    else:
        zs = np.ascontiguousarray(z_arr.transpose(1, 0, 2))
        for k in range(n):
            for i in range(m):
                b = B[i]
                r = R[i]
                nb = b - rdt * (zs[k, i, 1] * r)
                nr = r - bdt * (zs[k, i, 0] * b)
                if nb.real < 0.0 or nr.real < 0.0:
                    flag[i] = 1
                B[i] = nb
                R[i] = nr
    return out_b_arr, out_r_arr, flag_arr
