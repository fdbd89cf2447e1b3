# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled fixed-step integration kernels.

Semantics match ``_stepping_py`` exactly (same stage structure, same
floating-point operation order per stage up to associativity); the pure
version is the fallback when this extension is unavailable.
"""

import numpy as np

BACKEND_NAME = "compiled"

ctypedef double complex zdouble


cdef void _mm(zdouble[:, ::1] a, zdouble[:, ::1] b, zdouble[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t i, j, k, d = a.shape[0]
    cdef zdouble acc
    for i in range(d):
        for j in range(d):
            acc = 0
            for k in range(d):
                acc = acc + a[i, k] * b[k, j]
            out[i, j] = acc


cdef void _conjugate(zdouble[:, ::1] u, zdouble[:, ::1] rho, zdouble[:, ::1] out,
                     zdouble[:, ::1] scratch) noexcept nogil:
    # out = u rho u^dagger
    cdef Py_ssize_t i, j, k, d = u.shape[0]
    cdef zdouble acc
    _mm(u, rho, scratch)
    for i in range(d):
        for j in range(d):
            acc = 0
            for k in range(d):
                acc = acc + scratch[i, k] * u[j, k].conjugate()
            out[i, j] = acc


cdef void _lindblad_rhs(zdouble[:, ::1] h_op, zdouble[:, ::1] jm, zdouble[:, ::1] jp,
                        zdouble[:, ::1] jpjm, double gamma, zdouble[:, ::1] rho,
                        zdouble[:, ::1] out, zdouble[:, ::1] t1, zdouble[:, ::1] t2) noexcept nogil:
    cdef Py_ssize_t i, j, d = rho.shape[0]
    cdef zdouble minus_i = -1j
    _mm(h_op, rho, t1)
    _mm(rho, h_op, t2)
    for i in range(d):
        for j in range(d):
            out[i, j] = minus_i * (t1[i, j] - t2[i, j])
    _mm(jm, rho, t1)
    _mm(t1, jp, t2)
    for i in range(d):
        for j in range(d):
            out[i, j] = out[i, j] + gamma * t2[i, j]
    _mm(jpjm, rho, t1)
    _mm(rho, jpjm, t2)
    for i in range(d):
        for j in range(d):
            out[i, j] = out[i, j] - 0.5 * gamma * (t1[i, j] + t2[i, j])


def rk4_lindblad_steps(zdouble[:, ::1] h_op, zdouble[:, ::1] jm, zdouble[:, ::1] jp,
                       zdouble[:, ::1] jpjm, double gamma, zdouble[:, ::1] rho,
                       double h, Py_ssize_t n_steps):
    """Advance ``rho`` in place by classical RK4 steps of the Lindblad equation."""
    cdef Py_ssize_t d = rho.shape[0]
    cdef zdouble[:, ::1] k1 = np.empty((d, d), dtype=complex)
    cdef zdouble[:, ::1] k2 = np.empty((d, d), dtype=complex)
    cdef zdouble[:, ::1] k3 = np.empty((d, d), dtype=complex)
    cdef zdouble[:, ::1] k4 = np.empty((d, d), dtype=complex)
    cdef zdouble[:, ::1] y = np.empty((d, d), dtype=complex)
    cdef zdouble[:, ::1] t1 = np.empty((d, d), dtype=complex)
    cdef zdouble[:, ::1] t2 = np.empty((d, d), dtype=complex)
    cdef Py_ssize_t step, i, j
    with nogil:
        for step in range(n_steps):
            _lindblad_rhs(h_op, jm, jp, jpjm, gamma, rho, k1, t1, t2)
            for i in range(d):
                for j in range(d):
                    y[i, j] = rho[i, j] + 0.5 * h * k1[i, j]
            _lindblad_rhs(h_op, jm, jp, jpjm, gamma, y, k2, t1, t2)
            for i in range(d):
                for j in range(d):
                    y[i, j] = rho[i, j] + 0.5 * h * k2[i, j]
            _lindblad_rhs(h_op, jm, jp, jpjm, gamma, y, k3, t1, t2)
            for i in range(d):
                for j in range(d):
                    y[i, j] = rho[i, j] + h * k3[i, j]
            _lindblad_rhs(h_op, jm, jp, jpjm, gamma, y, k4, t1, t2)
            for i in range(d):
                for j in range(d):
                    rho[i, j] = rho[i, j] + (h / 6.0) * (
                        k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j])
    return np.asarray(rho)


cdef void _nojump_rhs(zdouble[:, ::1] heff, zdouble[:, ::1] heff_dag,
                      zdouble[:, ::1] jm, zdouble[:, ::1] jp, double gamma,
                      zdouble[:, ::1] level, zdouble[:, ::1] source,
                      zdouble[:, ::1] out, zdouble[:, ::1] t1, zdouble[:, ::1] t2) noexcept nogil:
    cdef Py_ssize_t i, j, d = level.shape[0]
    cdef zdouble minus_i = -1j
    _mm(heff, level, t1)
    _mm(level, heff_dag, t2)
    for i in range(d):
        for j in range(d):
            out[i, j] = minus_i * (t1[i, j] - t2[i, j])
    _mm(jm, source, t1)
    _mm(t1, jp, t2)
    for i in range(d):
        for j in range(d):
            out[i, j] = out[i, j] + gamma * t2[i, j]


cdef void _hierarchy_stage(zdouble[:, ::1] heff, zdouble[:, ::1] heff_dag,
                           zdouble[:, ::1] jm, zdouble[:, ::1] jp, double gamma,
                           zdouble[:, :, ::1] y, zdouble[:, ::1] p0_stage,
                           zdouble[:, :, ::1] out, zdouble[:, ::1] t1,
                           zdouble[:, ::1] t2) noexcept nogil:
    cdef Py_ssize_t n
    for n in range(y.shape[0]):
        if n == 0:
            _nojump_rhs(heff, heff_dag, jm, jp, gamma, y[0], p0_stage, out[0], t1, t2)
        else:
            _nojump_rhs(heff, heff_dag, jm, jp, gamma, y[n], y[n - 1], out[n], t1, t2)


def jump_hierarchy_steps(zdouble[:, ::1] u_full, zdouble[:, ::1] u_half,
                         zdouble[:, ::1] heff, zdouble[:, ::1] heff_dag,
                         zdouble[:, ::1] jm, zdouble[:, ::1] jp, double gamma,
                         zdouble[:, :, ::1] levels, double h, Py_ssize_t n_steps):
    """Advance the conditioned hierarchy in place; see the python twin for details."""
    cdef Py_ssize_t n_levels = levels.shape[0]
    cdef Py_ssize_t d = levels.shape[1]
    cdef Py_ssize_t n_upper = n_levels - 1
    cdef zdouble[:, ::1] p0_half = np.empty((d, d), dtype=complex)
    cdef zdouble[:, ::1] p0_full = np.empty((d, d), dtype=complex)
    cdef zdouble[:, ::1] t1 = np.empty((d, d), dtype=complex)
    cdef zdouble[:, ::1] t2 = np.empty((d, d), dtype=complex)
    cdef zdouble[:, :, ::1] k1 = np.empty((max(n_upper, 1), d, d), dtype=complex)
    cdef zdouble[:, :, ::1] k2 = np.empty((max(n_upper, 1), d, d), dtype=complex)
    cdef zdouble[:, :, ::1] k3 = np.empty((max(n_upper, 1), d, d), dtype=complex)
    cdef zdouble[:, :, ::1] k4 = np.empty((max(n_upper, 1), d, d), dtype=complex)
    cdef zdouble[:, :, ::1] ystage = np.empty((max(n_upper, 1), d, d), dtype=complex)
    cdef Py_ssize_t step, n, i, j
    with nogil:
        for step in range(n_steps):
            _conjugate(u_half, levels[0], p0_half, t1)
            _conjugate(u_full, levels[0], p0_full, t1)
            if n_upper > 0:
                _hierarchy_stage(heff, heff_dag, jm, jp, gamma,
                                 levels[1:], levels[0], k1, t1, t2)
                for n in range(n_upper):
                    for i in range(d):
                        for j in range(d):
                            ystage[n, i, j] = levels[n + 1, i, j] + 0.5 * h * k1[n, i, j]
                _hierarchy_stage(heff, heff_dag, jm, jp, gamma,
                                 ystage[:n_upper], p0_half, k2, t1, t2)
                for n in range(n_upper):
                    for i in range(d):
                        for j in range(d):
                            ystage[n, i, j] = levels[n + 1, i, j] + 0.5 * h * k2[n, i, j]
                _hierarchy_stage(heff, heff_dag, jm, jp, gamma,
                                 ystage[:n_upper], p0_half, k3, t1, t2)
                for n in range(n_upper):
                    for i in range(d):
                        for j in range(d):
                            ystage[n, i, j] = levels[n + 1, i, j] + h * k3[n, i, j]
                _hierarchy_stage(heff, heff_dag, jm, jp, gamma,
                                 ystage[:n_upper], p0_full, k4, t1, t2)
                for n in range(n_upper):
                    for i in range(d):
                        for j in range(d):
                            levels[n + 1, i, j] = levels[n + 1, i, j] + (h / 6.0) * (
                                k1[n, i, j] + 2.0 * k2[n, i, j]
                                + 2.0 * k3[n, i, j] + k4[n, i, j])
            for i in range(d):
                for j in range(d):
                    levels[0, i, j] = p0_full[i, j]
    return np.asarray(levels)
