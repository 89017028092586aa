"""Residual and score computation for MA and threshold-MA models.

Residuals are computed by the conditional recursion with zero initial
values (pre-sample observations and residuals are treated as zero).  The
module also provides an independent route to the same quantities through
the truncated companion-product expansion, which serves as a numerical
oracle for the recursion, plus the analytic derivative recursions used by
the Gauss-Newton fitter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _recursions
from .exceptions import ValidationError
from .model import ModelOrders, TmaParams, check_invertibility, companion_matrices
from .validation import as_series


@dataclass(frozen=True)
class ResidualSet:
    """Residual series plus the regime indicator that produced it."""

    eps: np.ndarray
    indicator: np.ndarray

    @property
    def n(self) -> int:
        return self.eps.size


@dataclass(frozen=True)
class ScoreSet:
    """Rows are (d eps_t / d phi', d eps_t / d psi') at the evaluation point."""

    U: np.ndarray

    @property
    def n(self) -> int:
        return self.U.shape[0]


def regime_indicator(y: np.ndarray, d: int, r: float) -> np.ndarray:
    """Indicator of ``y_{t-d} <= r`` with pre-sample observations equal to zero."""
    lagged = np.zeros(y.size)
    if d < y.size:
        lagged[d:] = y[: y.size - d]
    return lagged <= r


def residuals_ma(y, phi) -> ResidualSet:
    """Residuals of a linear MA model: ``eps_t = y_t - sum_i phi_i eps_{t-i}``."""
    y = as_series(y)
    phi = np.atleast_1d(np.asarray(phi, dtype=np.float64))
    if phi.size < 1:
        raise ValidationError("phi must be nonempty")
    ind = np.zeros(y.size)
    eps = _recursions.residual_recursion(y, phi, np.zeros(0), ind)
    return ResidualSet(eps=eps, indicator=np.zeros(y.size, dtype=bool))


def residuals_tma(y, params: TmaParams, orders: ModelOrders) -> ResidualSet:
    """Residuals of the threshold MA model at the given parameters.

    The same regime indicator (based on ``y_{t-d}``) applies to all ``q``
    shifted coefficients of observation ``t``.
    """
    y = as_series(y)
    _check_tma_inputs(params, orders)
    ind = regime_indicator(y, orders.d, params.r)
    eps = _recursions.residual_recursion(
        y, params.phi, params.psi, ind.astype(np.float64)
    )
    return ResidualSet(eps=eps, indicator=ind)


def residuals_via_expansion(
    y, params: TmaParams, orders: ModelOrders, J: int | None = None
) -> ResidualSet:
    """Residuals through the truncated expansion in past observations.

    ``eps_t = y_t + sum_{j=1}^{J} u' prod_{i=1}^{j}[Phi + Psi I(y_{t-d-i+1} <= r)] u y_{t-j}``
    with pre-sample observations equal to zero.  The default truncation
    makes the geometric tail smaller than 1e-12 relative; any ``J >= n - 1``
    reproduces the recursion exactly.
    """
    y = as_series(y)
    _check_tma_inputs(params, orders)
    _, a = check_invertibility(params.phi, params.psi)
    if J is None:
        J = default_truncation(a, orders.p)
    elif J < 0:
        raise ValidationError(f"J must be >= 0, got {J}")
    J = min(int(J), y.size - 1)
    pair = companion_matrices(params, orders)
    shifted = pair.Phi + pair.Psi

    n = y.size
    ind = regime_indicator(y, orders.d, params.r)
    eps = y.copy()
    # Running per-observation companion products, advanced one lag at a time.
    prod = np.broadcast_to(np.eye(orders.p), (n, orders.p, orders.p)).copy()
    for j in range(1, J + 1):
        # Indicator of y_{t-d-j+1} <= r as a function of t, pre-sample zero.
        shift = j - 1
        if shift == 0:
            ind_j = ind
        else:
            ind_j = np.zeros(n, dtype=bool)
            ind_j[shift:] = ind[: n - shift]
            ind_j[:shift] = 0.0 <= params.r
        factor = np.where(ind_j[:, None, None], shifted, pair.Phi)
        prod = prod @ factor
        weights = prod[:, 0, 0]
        lagged = np.zeros(n)
        lagged[j:] = y[: n - j]
        eps += weights * lagged
    return ResidualSet(eps=eps, indicator=ind)


def score_tma(y, params: TmaParams, orders: ModelOrders) -> ScoreSet:
    """Analytic derivatives of the residuals with respect to (phi, psi).

    The derivative with respect to the threshold ``r`` does not exist (the
    indicator is a step function) and is never computed.
    """
    y = as_series(y)
    _check_tma_inputs(params, orders)
    ind = regime_indicator(y, orders.d, params.r)
    _, U = _recursions.residual_and_score(
        y, params.phi, params.psi, ind.astype(np.float64)
    )
    return ScoreSet(U=U)


def score_ma(y, phi) -> ScoreSet:
    """Derivatives of the MA residuals with respect to phi."""
    y = as_series(y)
    phi = np.atleast_1d(np.asarray(phi, dtype=np.float64))
    if phi.size < 1:
        raise ValidationError("phi must be nonempty")
    _, U = _recursions.residual_and_score(y, phi, np.zeros(0), np.zeros(y.size))
    return ScoreSet(U=U)


def sse(res) -> float:
    """Sum of squared residuals."""
    eps = res.eps if isinstance(res, ResidualSet) else np.asarray(res, dtype=np.float64)
    if eps.size == 0:
        raise ValidationError("residual series is empty")
    return float(np.dot(eps, eps))


def default_truncation(a: float, p: int, tol: float = 1e-12) -> int:
    """Truncation length whose geometric tail a**(j/p) drops below ``tol``."""
    if a <= 0.0:
        return p
    if a >= 1.0:
        raise ValidationError(f"no finite truncation for contraction constant a={a}")
    return int(math.ceil(p * math.log(tol) / math.log(a)))


def _check_tma_inputs(params: TmaParams, orders: ModelOrders) -> None:
    if params.p != orders.p or params.q != orders.q:
        raise ValidationError(
            f"parameter lengths (p={params.p}, q={params.q}) do not match orders "
            f"(p={orders.p}, q={orders.q})"
        )
    if params.r is None:
        raise ValidationError("threshold r is required")
    ok, a = check_invertibility(params.phi, params.psi)
    if not ok:
        raise ValidationError(f"parameters are not invertible (a={a:.6g})")
