# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for the hard-margin SVM dual coordinate ascent.

Operates on the label-signed Gram matrix G[i, j] = y_i y_j x_i.x_j and
maximizes sum(alpha) - 0.5 * alpha' G alpha subject to alpha >= 0 by
cyclic coordinate updates.  The margin vector m = G alpha is maintained
incrementally and refreshed from scratch periodically to keep the
1e-8-level KKT checks meaningful.  The sweep loop runs without the GIL
so experiment threads overlap.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

DEF REFRESH_EVERY = 64


def solve_dual(double[:, ::1] G, double[::1] alpha, double kkt_tol,
               long max_sweeps, double alpha_cap):
    """Run cyclic coordinate ascent in place on ``alpha``.

    Returns (sweeps_used, kkt_violation, status) with status 0 on
    convergence, 1 when the sweep budget is exhausted and 2 when the
    dual iterates blow past ``alpha_cap`` (non-separable data).
    """
    cdef double[::1] m = np.zeros(G.shape[0], dtype=np.float64)
    cdef long sweeps_used = 0
    cdef double viol = 0.0
    cdef int status
    with nogil:
        status = _ascend(G, alpha, m, kkt_tol, max_sweeps, alpha_cap,
                         &sweeps_used, &viol)
    return sweeps_used, viol, status


cdef int _ascend(double[:, ::1] G, double[::1] alpha, double[::1] m,
                 double kkt_tol, long max_sweeps, double alpha_cap,
                 long* sweeps_used, double* viol) nogil:
    cdef Py_ssize_t n = G.shape[0]
    cdef Py_ssize_t i, j
    cdef long sweep
    cdef double delta, new_alpha, v, amax
    cdef int status = 1

    for i in range(n):
        if alpha[i] != 0.0:
            for j in range(n):
                m[j] += alpha[i] * G[j, i]

    viol[0] = _max_violation(G, alpha, m)
    if viol[0] <= kkt_tol:
        sweeps_used[0] = 0
        return 0

    for sweep in range(max_sweeps):
        for i in range(n):
            new_alpha = alpha[i] + (1.0 - m[i]) / G[i, i]
            if new_alpha < 0.0:
                new_alpha = 0.0
            delta = new_alpha - alpha[i]
            if delta != 0.0:
                alpha[i] = new_alpha
                for j in range(n):
                    m[j] += delta * G[i, j]
        sweeps_used[0] = sweep + 1

        amax = 0.0
        for i in range(n):
            if alpha[i] > amax:
                amax = alpha[i]
        if amax > alpha_cap:
            status = 2
            break

        viol[0] = 0.0
        for i in range(n):
            v = 1.0 - m[i]
            if alpha[i] > 0.0 and v < 0.0:
                v = -v
            if v > viol[0]:
                viol[0] = v
        if viol[0] <= kkt_tol or sweeps_used[0] % REFRESH_EVERY == 0:
            # Incremental m drifts; confirm against an exact recompute.
            _recompute(G, alpha, m)
            viol[0] = _max_violation(G, alpha, m)
            if viol[0] <= kkt_tol:
                status = 0
                break

    if status != 0:
        _recompute(G, alpha, m)
        viol[0] = _max_violation(G, alpha, m)
        if status == 1 and viol[0] <= kkt_tol:
            status = 0
    return status


cdef void _recompute(double[:, ::1] G, double[::1] alpha, double[::1] m) nogil:
    cdef Py_ssize_t n = G.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(n):
        acc = 0.0
        for j in range(n):
            acc += G[i, j] * alpha[j]
        m[i] = acc


cdef double _max_violation(double[:, ::1] G, double[::1] alpha,
                           double[::1] m) nogil:
    cdef Py_ssize_t n = G.shape[0]
    cdef Py_ssize_t i
    cdef double viol = 0.0, v
    for i in range(n):
        v = 1.0 - m[i]
        if alpha[i] > 0.0 and v < 0.0:
            v = -v
        if v > viol:
            viol = v
    return viol
