"""Conditional least-squares estimation.

The null MA fit and the fixed-threshold TMA fit both minimize the sum of
squared recursive residuals with a damped Gauss-Newton iteration driven by
the analytic scores.  The compact parameter region is enforced through a
quadratic barrier on the contraction constant rather than a constrained
solver.  ``profile_threshold`` sweeps a quantile-bounded grid of threshold
candidates, warm-starting each fit from its neighbor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _recursions
from .exceptions import ValidationError
from .model import ModelOrders, TmaParams
from .residuals import regime_indicator
from .validation import as_series, check_positive_int, check_quantile_levels

MAX_ITER = 200
PSI_PERTURBATION = _recursions.PSI_START_SHIFT


@dataclass(frozen=True)
class ThresholdGrid:
    """Sorted threshold candidates between two empirical quantiles."""

    candidates: np.ndarray
    beta1: float
    beta2: float

    @property
    def m(self) -> int:
        return self.candidates.size


@dataclass(frozen=True)
class FitResult:
    """Outcome of one least-squares fit."""

    params: TmaParams
    sse: float
    sigma2: float
    converged: bool
    iterations: int
    grad_norm: float

    @property
    def n_params(self) -> int:
        return self.params.p + self.params.q


@dataclass(frozen=True)
class ProfileResult:
    """Per-candidate fits over a threshold grid and the argmin threshold."""

    grid: ThresholdGrid
    fits: list
    r_hat: float
    n_failed: int

    def best(self) -> FitResult:
        sses = [f.sse if f is not None else math.inf for f in self.fits]
        return self.fits[int(np.argmin(sses))]


def threshold_grid(y, beta1: float = 0.1, beta2: float = 0.9, max_points: int = 60) -> ThresholdGrid:
    """Distinct order statistics between the beta1- and beta2-quantiles.

    The candidate set is thinned evenly to at most ``max_points`` values,
    always keeping both endpoints.
    """
    y = as_series(y)
    beta1, beta2 = check_quantile_levels(beta1, beta2)
    check_positive_int(max_points, "max_points")
    n = y.size
    lo = max(int(math.ceil(n * beta1)), 1)
    hi = min(int(math.floor(n * beta2)), n)
    if lo > hi:
        raise ValidationError(
            f"empty quantile range: order statistics {lo}..{hi} for n={n}"
        )
    window = np.sort(y)[lo - 1 : hi]
    candidates = np.unique(window)
    if candidates.size < 2:
        raise ValidationError(
            "degenerate grid: fewer than 2 distinct values between the quantiles"
        )
    if candidates.size > max_points:
        idx = np.unique(np.linspace(0, candidates.size - 1, max_points).round().astype(int))
        candidates = candidates[idx]
    return ThresholdGrid(candidates=candidates, beta1=beta1, beta2=beta2)


def _run_starts(y, ind, p, q, starts, r):
    """Run Gauss-Newton from several starts, keep the best penalized objective."""
    starts = np.ascontiguousarray(np.vstack(starts))
    lam, sse_val, converged, iters, grad_norm = _recursions.gn_fit_multi(
        y, ind, p, q, starts, MAX_ITER
    )
    params = TmaParams(phi=lam[:p].copy(), psi=lam[p:].copy(), r=r)
    return FitResult(
        params=params,
        sse=float(sse_val),
        sigma2=float(sse_val) / y.size,
        converged=bool(converged),
        iterations=int(iters),
        grad_norm=float(grad_norm),
    )


def _ma_moment_start(y: np.ndarray) -> float:
    """Invertible MA(1) coefficient matched to the lag-1 autocorrelation."""
    c = y - y.mean()
    denom = float(np.dot(c, c))
    if denom <= 0.0:
        return 0.0
    rho = float(np.dot(c[1:], c[:-1])) / denom
    rho = min(max(rho, -0.495), 0.495)
    if abs(rho) < 1e-8:
        return 0.0
    return (1.0 - math.sqrt(1.0 - 4.0 * rho * rho)) / (2.0 * rho)


def fit_ma(y, p: int) -> FitResult:
    """Conditional least-squares fit of a linear MA(p) model."""
    check_positive_int(p, "p")
    y = as_series(y)
    if y.size <= 10 * p:
        raise ValidationError(f"need n > 10*p observations, got n={y.size} for p={p}")
    ind = np.zeros(y.size)
    starts = [np.zeros(p)]
    if p == 1:
        guess = _ma_moment_start(y)
        if guess != 0.0:
            starts.append(np.array([guess]))
    return _run_starts(y, ind, p, 0, starts, r=None)


def fit_tma_fixed_r(
    y,
    orders: ModelOrders,
    r: float,
    init: TmaParams | None = None,
    null_fit: FitResult | None = None,
) -> FitResult:
    """Fit the threshold MA model with the threshold held fixed at ``r``.

    Multi-start: the null fit with zero shift, the same point with the
    shift coefficients perturbed by +/-0.1, and optionally ``init``.
    """
    y = as_series(y)
    r = float(r)
    if null_fit is None:
        null_fit = fit_ma(y, orders.p)
    phi0 = null_fit.params.phi
    ind = regime_indicator(y, orders.d, r).astype(np.float64)
    starts = []
    if init is not None:
        if init.p != orders.p or init.q != orders.q:
            raise ValidationError("init parameter lengths do not match orders")
        starts.append(np.concatenate([init.phi, init.psi]))
    q = orders.q
    starts.append(np.concatenate([phi0, np.zeros(q)]))
    starts.append(np.concatenate([phi0, np.full(q, PSI_PERTURBATION)]))
    starts.append(np.concatenate([phi0, np.full(q, -PSI_PERTURBATION)]))
    return _run_starts(y, ind, orders.p, q, starts, r=r)


def profile_threshold(
    y,
    orders: ModelOrders,
    grid: ThresholdGrid,
    null_fit: FitResult | None = None,
) -> ProfileResult:
    """Fit every grid candidate and locate the minimizing threshold.

    Candidates are swept in ascending order with each fit warm-started from
    its neighbor's solution on top of the fixed multi-starts, so the
    reported ``r_hat`` does not depend on sweep direction.  A candidate
    whose fit fails is recorded as ``None`` and excluded from the argmin;
    ties break to the smallest threshold.
    """
    y = as_series(y)
    if grid.m < 1:
        raise ValidationError("threshold grid is empty")
    if null_fit is None:
        null_fit = fit_ma(y, orders.p)
    ylag = np.zeros(y.size)
    if orders.d < y.size:
        ylag[orders.d :] = y[: y.size - orders.d]
    lams, sses, convs, iters, gnorms = _recursions.profile_sweep(
        y, ylag, grid.candidates, orders.p, orders.q, null_fit.params.phi, MAX_ITER
    )
    fits: list[FitResult | None] = []
    n_failed = 0
    for i, r in enumerate(grid.candidates):
        if not math.isfinite(sses[i]):
            fits.append(None)
            n_failed += 1
            continue
        params = TmaParams(
            phi=lams[i, : orders.p].copy(), psi=lams[i, orders.p :].copy(), r=float(r)
        )
        fits.append(
            FitResult(
                params=params,
                sse=float(sses[i]),
                sigma2=float(sses[i]) / y.size,
                converged=bool(convs[i]),
                iterations=int(iters[i]),
                grad_norm=float(gnorms[i]),
            )
        )
    if n_failed == grid.m:
        raise ValidationError("every threshold candidate failed to fit")
    valid = np.where(np.isfinite(sses), sses, math.inf)
    r_hat = float(grid.candidates[int(np.argmin(valid))])
    return ProfileResult(grid=grid, fits=fits, r_hat=r_hat, n_failed=n_failed)
