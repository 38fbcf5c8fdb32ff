# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled coordinate-sweep kernels (see ``_sweeps_py`` for the contract)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

DEF DEGENERATE_DIAG = 1e-14


cdef inline double _soft(double u, double eta) noexcept nogil:
    if u > eta:
        return u - eta
    if u < -eta:
        return u + eta
    return 0.0


cdef inline double _clamp01(double v) noexcept nogil:
    if v < 0.0:
        return 0.0
    if v > 1.0:
        return 1.0
    return v


def box_lasso_cd(double[:, ::1] q, double[::1] c, double eta, double tol,
                 int max_sweeps, double[::1] s):
    cdef Py_ssize_t n_dim = s.shape[0]
    cdef Py_ssize_t n, j, sweep
    cdef int used = max_sweeps
    cdef double half_eta = 0.5 * eta
    cdef double delta_max, qnn, w, acc, new, d
    with nogil:
        for sweep in range(max_sweeps):
            delta_max = 0.0
            for n in range(n_dim):
                qnn = q[n, n]
                acc = 0.0
                for j in range(n_dim):
                    acc += q[j, n] * s[j]
                w = c[n] - (acc - qnn * s[n])
                if qnn <= DEGENERATE_DIAG:
                    new = 1.0 if (qnn - 2.0 * w + eta) < 0.0 else 0.0
                else:
                    new = _clamp01(_soft(w, half_eta) / qnn)
                d = new - s[n]
                if d < 0.0:
                    d = -d
                if d > delta_max:
                    delta_max = d
                s[n] = new
            if delta_max < tol:
                used = sweep + 1
                break
    return used


def gs_qp_sweep(double[:, ::1] q, double[::1] u, double[::1] s):
    cdef Py_ssize_t n_dim = s.shape[0]
    cdef Py_ssize_t n, j
    cdef double qnn, acc
    with nogil:
        for n in range(n_dim):
            qnn = q[n, n]
            acc = 0.0
            for j in range(n_dim):
                acc += q[j, n] * s[j]
            s[n] = (u[n] - (acc - qnn * s[n])) / qnn
    return None


def fista_sweep(double complex[:, ::1] ct, double[::1] diag_extra,
                double[::1] c_lin, double eta, double[::1] s):
    cdef Py_ssize_t n_dim = s.shape[0]
    cdef Py_ssize_t k_dim = ct.shape[1]
    cdef Py_ssize_t n, k
    cdef double half_eta = 0.5 * eta
    cdef double z, row_t, w, new, d
    cdef double complex acc
    t_arr = np.conj(np.asarray(ct).T) @ np.asarray(s)
    cdef double complex[::1] t = np.ascontiguousarray(t_arr)
    with nogil:
        for n in range(n_dim):
            z = diag_extra[n]
            for k in range(k_dim):
                z += (ct[n, k].real * ct[n, k].real
                      + ct[n, k].imag * ct[n, k].imag)
            if z <= DEGENERATE_DIAG:
                new = 0.0
            else:
                acc = 0.0
                for k in range(k_dim):
                    acc = acc + ct[n, k] * t[k]
                row_t = acc.real
                w = c_lin[n] - row_t + (z - diag_extra[n]) * s[n]
                new = _clamp01(_soft(w, half_eta) / z)
            d = new - s[n]
            if d != 0.0:
                for k in range(k_dim):
                    t[k] = t[k] + d * ct[n, k].conjugate()
                s[n] = new
    return None
