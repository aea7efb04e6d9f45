"""Pure-NumPy twin of the compiled dual coordinate-ascent kernel.

Used when the Cython extension is unavailable.  Same contract and same
update order as ``_svm_core.solve_dual``; only the inner loop lives in
Python, so expect it to be roughly an order of magnitude slower.
"""

import numpy as np

REFRESH_EVERY = 64


def _max_violation(alpha, m):
    v = 1.0 - m
    active = alpha > 0.0
    v[active] = np.abs(v[active])
    v[~active] = np.maximum(v[~active], 0.0)
    return float(v.max()) if v.size else 0.0


def solve_dual(G, alpha, kkt_tol, max_sweeps, alpha_cap):
    """Cyclic coordinate ascent in place on ``alpha``; see _svm_core."""
    n = G.shape[0]
    m = G @ alpha if np.any(alpha) else np.zeros(n)
    viol = _max_violation(alpha, m)
    if viol <= kkt_tol:
        return 0, viol, 0

    diag = np.ascontiguousarray(np.diag(G))
    sweeps_used = 0
    status = 1
    for sweep in range(max_sweeps):
        for i in range(n):
            new_alpha = alpha[i] + (1.0 - m[i]) / diag[i]
            if new_alpha < 0.0:
                new_alpha = 0.0
            delta = new_alpha - alpha[i]
            if delta != 0.0:
                alpha[i] = new_alpha
                m += delta * G[i]
        sweeps_used = sweep + 1

        if alpha.max() > alpha_cap:
            status = 2
            break

        viol = _max_violation(alpha, m)
        if viol <= kkt_tol or sweeps_used % REFRESH_EVERY == 0:
            m = G @ alpha
            viol = _max_violation(alpha, m)
            if viol <= kkt_tol:
                status = 0
                break

    if status != 0:
        m = G @ alpha
        viol = _max_violation(alpha, m)
        if status == 1 and viol <= kkt_tol:
            status = 0
    return sweeps_used, viol, status
