"""Residual diagnostics: autocorrelations, portmanteau test, AIC."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .exceptions import ValidationError
from .validation import as_series


@dataclass(frozen=True)
class PortmanteauResult:
    """Ljung-Box statistic ``Q`` over ``M`` lags with its chi-square p-value."""

    M: int
    Q: float
    df: int
    p_value: float


def acf(x, max_lag: int) -> np.ndarray:
    """Sample autocorrelations at lags 0..max_lag (mean-centered)."""
    x = as_series(x, "x", min_length=2)
    if max_lag < 0 or max_lag >= x.size:
        raise ValidationError(f"max_lag must lie in [0, n), got {max_lag} for n={x.size}")
    c = x - x.mean()
    denom = float(np.dot(c, c))
    if denom <= 0.0:
        raise ValidationError("autocorrelation is undefined for a constant series")
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    for k in range(1, max_lag + 1):
        out[k] = float(np.dot(c[k:], c[:-k])) / denom
    return out


def ljung_box(residuals, M: int, fitted_params: int = 0) -> PortmanteauResult:
    """Ljung-Box whiteness test ``Q = n(n+2) sum_k rho_k^2/(n-k)``.

    Degrees of freedom are ``M - fitted_params``; pass ``fitted_params=0``
    for the unadjusted convention.
    """
    residuals = as_series(residuals, "residuals", min_length=2)
    if M < 1:
        raise ValidationError(f"M must be >= 1, got {M}")
    if fitted_params < 0:
        raise ValidationError(f"fitted_params must be >= 0, got {fitted_params}")
    df = M - fitted_params
    if df < 1:
        raise ValidationError(
            f"invalid degrees of freedom: M={M} must exceed fitted_params={fitted_params}"
        )
    n = residuals.size
    rho = acf(residuals, M)[1:]
    k = np.arange(1, M + 1)
    Q = float(n * (n + 2) * np.sum(rho * rho / (n - k)))
    p_value = float(stats.chi2.sf(Q, df))
    return PortmanteauResult(M=M, Q=Q, df=df, p_value=p_value)


def aic(n: int, sse: float, k_params: int) -> float:
    """Gaussian quasi-likelihood AIC: ``n*ln(sse/n) + 2*k_params``.

    Only differences between fits on the same data are meaningful.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if not (sse > 0.0):
        raise ValidationError(f"sse must be positive, got {sse}")
    if k_params < 0:
        raise ValidationError(f"k_params must be >= 0, got {k_params}")
    return float(n * np.log(sse / n) + 2.0 * k_params)
