"""Numba kernels for the sequential recursions and the inner least-squares loop.

Everything here is deliberately loop-based: the residual, score and
simulation recursions are sequential in ``t`` and run millions of times
inside Monte Carlo experiments.  Summation order is fixed (ascending t,
ascending lag) so that repeated runs are bitwise reproducible and the
``psi = 0`` path coincides exactly with the plain moving-average path.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Penalized parameter region: contraction constants above A_BOUND pay a
# steep quadratic penalty, keeping iterates invertible without a
# constrained solver.
A_BOUND = 1.0 - 1e-6
PENALTY_WEIGHT = 1e8

GRAD_TOL = 1e-8
MAX_HALVINGS = 40
PSI_START_SHIFT = 0.1


@njit(cache=True)
def simulate_path(eps, phi, psi, r, d):
    """Generate a sample path driven by the innovations ``eps``.

    Pre-sample innovations and observations are zero and the regime
    indicator stays off until the lagged observation exists.
    """
    n = eps.shape[0]
    p = phi.shape[0]
    q = psi.shape[0]
    y = np.zeros(n)
    for t in range(n):
        acc = eps[t]
        for i in range(1, p + 1):
            if t - i >= 0:
                acc += phi[i - 1] * eps[t - i]
        if t - d >= 0 and y[t - d] <= r:
            for i in range(1, q + 1):
                if t - i >= 0:
                    acc += psi[i - 1] * eps[t - i]
        y[t] = acc
    return y


@njit(cache=True)
def residual_recursion(y, phi, psi, ind):
    """Recursive residuals with zero initial values.

    ``ind`` is the per-observation regime indicator (0.0 or 1.0); the
    effective coefficient at lag i is ``phi_i + psi_i * ind_t``.
    """
    n = y.shape[0]
    p = phi.shape[0]
    q = psi.shape[0]
    eps = np.zeros(n)
    for t in range(n):
        it = ind[t]
        e = y[t]
        for i in range(1, p + 1):
            if t - i >= 0:
                c = phi[i - 1]
                if i <= q:
                    c = c + psi[i - 1] * it
                e -= c * eps[t - i]
        eps[t] = e
    return eps


@njit(cache=True)
def residual_and_score(y, phi, psi, ind):
    """Residuals plus the (p+q)-column matrix of their parameter derivatives.

    Column k < p holds d(eps_t)/d(phi_{k+1}); column p + l holds
    d(eps_t)/d(psi_{l+1}).  Both satisfy the same damped recursion as the
    residuals themselves, driven by lagged residuals (times the regime
    indicator for the psi block).
    """
    n = y.shape[0]
    p = phi.shape[0]
    q = psi.shape[0]
    k = p + q
    eps = np.zeros(n)
    U = np.zeros((n, k))
    for t in range(n):
        it = ind[t]
        e = y[t]
        for i in range(1, p + 1):
            if t - i >= 0:
                c = phi[i - 1]
                if i <= q:
                    c = c + psi[i - 1] * it
                e -= c * eps[t - i]
        eps[t] = e
        for col in range(k):
            if col < p:
                lag = col + 1
                s = -eps[t - lag] if t - lag >= 0 else 0.0
            else:
                lag = col - p + 1
                s = -eps[t - lag] * it if t - lag >= 0 else 0.0
            for i in range(1, p + 1):
                if t - i >= 0:
                    c = phi[i - 1]
                    if i <= q:
                        c = c + psi[i - 1] * it
                    s -= c * U[t - i, col]
            U[t, col] = s
    return eps, U


@njit(cache=True)
def penalty_value_grad(lam, p, q):
    """Quadratic barrier on the contraction constant and its subgradient."""
    k = p + q
    grad = np.zeros(k)
    s1 = 0.0
    s2 = 0.0
    for i in range(p):
        v = lam[i]
        s1 += abs(v)
        w = v
        if i < q:
            w = w + lam[p + i]
        s2 += abs(w)
    a = s1 if s1 >= s2 else s2
    m = a - A_BOUND
    if m <= 0.0:
        return 0.0, grad
    scale = 2.0 * PENALTY_WEIGHT * m
    if s1 >= s2:
        for i in range(p):
            v = lam[i]
            grad[i] = scale * (1.0 if v > 0.0 else (-1.0 if v < 0.0 else 0.0))
    else:
        for i in range(p):
            w = lam[i]
            if i < q:
                w = w + lam[p + i]
            g = scale * (1.0 if w > 0.0 else (-1.0 if w < 0.0 else 0.0))
            grad[i] = g
            if i < q:
                grad[p + i] = g
    return PENALTY_WEIGHT * m * m, grad


@njit(cache=True)
def _solve_spd(A, b):
    """Cholesky solve with adaptive jitter; never raises."""
    k = A.shape[0]
    trace = 0.0
    for i in range(k):
        trace += A[i, i]
    ridge = 0.0
    base = 1e-12 * (trace / k + 1.0)
    for _attempt in range(40):
        L = np.zeros((k, k))
        ok = True
        for i in range(k):
            for j in range(i + 1):
                s = A[i, j]
                if i == j:
                    s += ridge
                for m in range(j):
                    s -= L[i, m] * L[j, m]
                if i == j:
                    if s <= 0.0:
                        ok = False
                        break
                    L[i, i] = np.sqrt(s)
                else:
                    L[i, j] = s / L[j, j]
            if not ok:
                break
        if ok:
            x = b.copy()
            for i in range(k):
                for m in range(i):
                    x[i] -= L[i, m] * x[m]
                x[i] /= L[i, i]
            for i in range(k - 1, -1, -1):
                for m in range(i + 1, k):
                    x[i] -= L[m, i] * x[m]
                x[i] /= L[i, i]
            return x, True
        ridge = base if ridge == 0.0 else ridge * 10.0
    return np.zeros(k), False


@njit(cache=True)
def gn_fit(y, ind, p, q, lam0, max_iter):
    """Damped Gauss-Newton minimization of the penalized residual sum of squares.

    Returns ``(lam, sse, penalty, converged, iterations, grad_norm)``.
    ``sse`` is the raw sum of squared residuals at the final iterate;
    convergence means the penalized gradient norm fell below
    ``GRAD_TOL * (1 + sse)``.
    """
    k = p + q
    lam = lam0.copy()
    eps, U = residual_and_score(y, lam[:p], lam[p:], ind)
    sse = np.dot(eps, eps)
    pen, pgrad = penalty_value_grad(lam, p, q)
    f = sse + pen
    converged = False
    iters = 0
    grad_norm = 0.0
    stalled = 0
    for _step in range(max_iter):
        Jte = np.dot(U.T, eps)
        g = 2.0 * Jte + pgrad
        grad_norm = np.sqrt(np.dot(g, g))
        if grad_norm <= GRAD_TOL * (1.0 + sse):
            converged = True
            break
        iters += 1
        JTJ = np.dot(U.T, U)
        if pen > 0.0:
            # Barrier curvature (grad grad' / (4 pen) == weight * s s' for
            # the quadratic barrier); without it the step model ignores the
            # barrier and the line search degenerates to micro-steps.
            JTJ = JTJ + np.outer(pgrad, pgrad) / (4.0 * pen)
        rhs = -Jte - 0.5 * pgrad
        delta, ok = _solve_spd(JTJ, rhs)
        if not ok:
            break
        improved = False
        alpha = 1.0
        lam_new = lam
        sse_new = sse
        pen_new = pen
        for _h in range(MAX_HALVINGS):
            lam_try = lam + alpha * delta
            eps_try = residual_recursion(y, lam_try[:p], lam_try[p:], ind)
            sse_try = np.dot(eps_try, eps_try)
            pen_try, _ = penalty_value_grad(lam_try, p, q)
            if sse_try + pen_try < f:
                lam_new = lam_try
                sse_new = sse_try
                pen_new = pen_try
                improved = True
                break
            alpha *= 0.5
        if not improved:
            # Gauss-Newton direction stalled; try plain descent once.
            scale = 1.0 / (1.0 + grad_norm)
            for _h in range(MAX_HALVINGS):
                lam_try = lam - scale * g
                eps_try = residual_recursion(y, lam_try[:p], lam_try[p:], ind)
                sse_try = np.dot(eps_try, eps_try)
                pen_try, _ = penalty_value_grad(lam_try, p, q)
                if sse_try + pen_try < f:
                    lam_new = lam_try
                    sse_new = sse_try
                    pen_new = pen_try
                    improved = True
                    break
                scale *= 0.5
        if not improved:
            break
        f_new = sse_new + pen_new
        # Improvements at double-precision noise level mean the iterate is
        # pinned (typically against the invertibility barrier); stop early.
        if f - f_new <= 1e-13 * (1.0 + abs(f_new)):
            stalled += 1
        else:
            stalled = 0
        lam = lam_new
        sse = sse_new
        pen = pen_new
        f = f_new
        eps, U = residual_and_score(y, lam[:p], lam[p:], ind)
        pen, pgrad = penalty_value_grad(lam, p, q)
        if stalled >= 2:
            break
    if not converged:
        g = 2.0 * np.dot(U.T, eps) + pgrad
        grad_norm = np.sqrt(np.dot(g, g))
        if grad_norm <= GRAD_TOL * (1.0 + sse):
            converged = True
    return lam, sse, pen, converged, iters, grad_norm


@njit(cache=True)
def gn_fit_multi(y, ind, p, q, starts, max_iter):
    """Run ``gn_fit`` from each start; keep the best penalized objective.

    Ties resolve to the earliest start, so the caller's start order is part
    of the contract.
    """
    best_f = np.inf
    k = p + q
    best_lam = np.zeros(k)
    best_sse = np.inf
    best_conv = False
    best_iters = 0
    best_gnorm = np.inf
    for s in range(starts.shape[0]):
        lam, sse, pen, conv, iters, gnorm = gn_fit(y, ind, p, q, starts[s], max_iter)
        f = sse + pen
        if f < best_f:
            best_f = f
            best_lam = lam
            best_sse = sse
            best_conv = conv
            best_iters = iters
            best_gnorm = gnorm
    return best_lam, best_sse, best_conv, best_iters, best_gnorm


@njit(cache=True)
def profile_sweep(y, ylag, candidates, p, q, phi0, max_iter):
    """Fit every threshold candidate, warm-starting from the neighbor.

    Start order per candidate is (warm, null, +0.1, -0.1) shift starts,
    matching the fixed-threshold fit with the warm solution as ``init``.
    """
    n = y.shape[0]
    m = candidates.shape[0]
    k = p + q
    out_lam = np.empty((m, k))
    out_sse = np.empty(m)
    out_conv = np.zeros(m, dtype=np.bool_)
    out_iters = np.zeros(m, dtype=np.int64)
    out_gnorm = np.empty(m)
    fixed = np.empty((3, k))
    for j in range(p):
        fixed[0, j] = phi0[j]
        fixed[1, j] = phi0[j]
        fixed[2, j] = phi0[j]
    for j in range(q):
        fixed[0, p + j] = 0.0
        fixed[1, p + j] = PSI_START_SHIFT
        fixed[2, p + j] = -PSI_START_SHIFT
    ind = np.empty(n)
    warm = np.zeros(k)
    have_warm = False
    for i in range(m):
        r = candidates[i]
        for t in range(n):
            ind[t] = 1.0 if ylag[t] <= r else 0.0
        if have_warm:
            starts = np.empty((4, k))
            starts[0] = warm
            starts[1:] = fixed
        else:
            starts = fixed
        lam, sse, conv, iters, gnorm = gn_fit_multi(y, ind, p, q, starts, max_iter)
        out_lam[i] = lam
        out_sse[i] = sse
        out_conv[i] = conv
        out_iters[i] = iters
        out_gnorm[i] = gnorm
        warm = lam
        have_warm = True
    return out_lam, out_sse, out_conv, out_iters, out_gnorm
