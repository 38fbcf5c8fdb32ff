"""Pure-Python (numpy) implementations of the coordinate-sweep kernels.

Semantics are identical to the compiled versions in ``_sweeps_cy``; only
speed differs. All arrays must be contiguous float64 / complex128 and the
selection vector ``s`` is updated in place.
"""

import numpy as np

# Diagonal entries at or below this are treated as degenerate (dead antenna
# under the current receiver); mirrors the compiled kernel exactly.
DEGENERATE_DIAG = 1e-14


def _soft(u, eta):
    if abs(u) <= eta:
        return 0.0
    return u - eta if u > 0.0 else u + eta


def box_lasso_cd(q, c, eta, tol, max_sweeps, s):
    """Cyclic coordinate descent for min s'Qs - 2c's + eta*||s||_1 on [0,1]^N.

    Each coordinate is set to the exact scalar minimizer
    clamp(soft(w_n, eta/2) / Q_nn, 0, 1) with
    w_n = c_n - sum_{n' != n} Q_{n'n} s_{n'}.
    Stops when the largest coordinate change in a sweep drops below ``tol``.
    Returns the number of sweeps performed.
    """
    n_dim = s.shape[0]
    half_eta = 0.5 * eta
    for sweep in range(max_sweeps):
        delta_max = 0.0
        for n in range(n_dim):
            qnn = q[n, n]
            w = c[n] - (q[:, n] @ s - qnn * s[n])
            if qnn <= DEGENERATE_DIAG:
                # Coordinate objective is (numerically) linear; pick the
                # cheaper box endpoint.
                new = 1.0 if (qnn - 2.0 * w + eta) < 0.0 else 0.0
            else:
                new = _soft(w, half_eta) / qnn
                if new < 0.0:
                    new = 0.0
                elif new > 1.0:
                    new = 1.0
            d = abs(new - s[n])
            if d > delta_max:
                delta_max = d
            s[n] = new
        if delta_max < tol:
            return sweep + 1
    return max_sweeps


def gs_qp_sweep(q, u, s):
    """One Gauss-Seidel sweep for min s'Qs - 2u's, s_n <- C_n / Q_nn.

    ``q`` must be real symmetric with strictly positive diagonal (the caller
    checks; the penalty terms make it so).
    """
    n_dim = s.shape[0]
    for n in range(n_dim):
        qnn = q[n, n]
        w = u[n] - (q[:, n] @ s - qnn * s[n])
        s[n] = w / qnn
    return None


def fista_sweep(ct, diag_extra, c_lin, eta, s):
    """One Gauss-Seidel soft-thresholding sweep in O(N*K).

    The selection quadratic is Q = ct @ ct^H + Diag(diag_extra); the sweep
    never forms Q, maintaining t = ct^H s instead so each coordinate costs
    O(K). Coordinates with vanishing curvature are zeroed (dead antenna).
    """
    n_dim = s.shape[0]
    half_eta = 0.5 * eta
    t = np.conj(ct.T) @ s
    for n in range(n_dim):
        row = ct[n, :]
        z = float(np.real(row @ np.conj(row))) + diag_extra[n]
        if z <= DEGENERATE_DIAG:
            new = 0.0
        else:
            row_t = float(np.real(row @ t))
            w = c_lin[n] - row_t + (z - diag_extra[n]) * s[n]
            new = _soft(w, half_eta) / z
            if new < 0.0:
                new = 0.0
            elif new > 1.0:
                new = 1.0
        d = new - s[n]
        if d != 0.0:
            t += d * np.conj(row)
            s[n] = new
    return None
