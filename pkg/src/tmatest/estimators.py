"""Scikit-learn style estimator wrappers.

These thin classes expose the functional core through the familiar
``fit`` / fitted-attribute idiom, with ``get_params``/``set_params`` (and
therefore ``sklearn.base.clone``) working out of the box.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .diagnostics import aic
from .estimate import fit_ma, profile_threshold, threshold_grid
from .lr_test import DEFAULT_STATISTIC_SCALE, run_test
from .model import ModelOrders
from .residuals import residuals_ma, residuals_tma
from .validation import as_series


class MovingAverageCLS(BaseEstimator):
    """Conditional least-squares fit of a linear MA(p) model.

    Attributes (after ``fit``): ``phi_``, ``sse_``, ``sigma2_``, ``aic_``,
    ``converged_``, ``n_iter_``, ``resid_``.
    """

    def __init__(self, p: int = 1):
        self.p = p

    def fit(self, y, X=None):
        y = as_series(y)
        result = fit_ma(y, self.p)
        self.phi_ = result.params.phi
        self.sse_ = result.sse
        self.sigma2_ = result.sigma2
        self.aic_ = aic(y.size, result.sse, self.p)
        self.converged_ = result.converged
        self.n_iter_ = result.iterations
        self.resid_ = residuals_ma(y, self.phi_).eps
        self.n_ = y.size
        return self

    def residuals(self, y) -> np.ndarray:
        _check_fitted(self, "phi_")
        return residuals_ma(as_series(y), self.phi_).eps


class ThresholdMovingAverageCLS(BaseEstimator):
    """Conditional least-squares fit of a threshold MA(p, q, d) model.

    The threshold is profiled over the distinct order statistics between
    the ``beta1``- and ``beta2``-quantiles.  Attributes (after ``fit``):
    ``phi_``, ``psi_``, ``r_``, ``sse_``, ``sigma2_``, ``aic_``, ``grid_``,
    ``profile_``, ``resid_``.
    """

    def __init__(
        self,
        p: int = 1,
        q: int = 1,
        d: int = 1,
        beta1: float = 0.1,
        beta2: float = 0.9,
        grid_max_points: int = 60,
    ):
        self.p = p
        self.q = q
        self.d = d
        self.beta1 = beta1
        self.beta2 = beta2
        self.grid_max_points = grid_max_points

    def _orders(self) -> ModelOrders:
        return ModelOrders(p=self.p, q=self.q, d=self.d)

    def fit(self, y, X=None):
        y = as_series(y)
        orders = self._orders()
        grid = threshold_grid(y, self.beta1, self.beta2, self.grid_max_points)
        profile = profile_threshold(y, orders, grid)
        best = profile.best()
        self.phi_ = best.params.phi
        self.psi_ = best.params.psi
        self.r_ = profile.r_hat
        self.sse_ = best.sse
        self.sigma2_ = best.sigma2
        self.aic_ = aic(y.size, best.sse, self.p + self.q)
        self.converged_ = best.converged
        self.grid_ = grid
        self.profile_ = profile
        self.resid_ = residuals_tma(y, best.params, orders).eps
        self.n_ = y.size
        return self

    def residuals(self, y) -> np.ndarray:
        _check_fitted(self, "phi_")
        best = self.profile_.best()
        return residuals_tma(as_series(y), best.params, self._orders()).eps


class ThresholdLRTest(BaseEstimator):
    """Sup-LR test of a linear MA null against threshold MA alternatives.

    Attributes (after ``fit``): ``lr_n_``, ``p_value_``, ``reject_``,
    ``critical_values_``, ``method_``, ``profile_``, ``report_``.
    """

    def __init__(
        self,
        p: int = 1,
        q: int = 1,
        d: int = 1,
        beta1: float = 0.1,
        beta2: float = 0.9,
        alphas=(0.10, 0.05, 0.01),
        replications: int = 25_000,
        seed: int = 0,
        grid_max_points: int = 60,
        statistic_scale: float = DEFAULT_STATISTIC_SCALE,
        method: str = "auto",
        bridge_grid_points: int = 400,
    ):
        self.p = p
        self.q = q
        self.d = d
        self.beta1 = beta1
        self.beta2 = beta2
        self.alphas = alphas
        self.replications = replications
        self.seed = seed
        self.grid_max_points = grid_max_points
        self.statistic_scale = statistic_scale
        self.method = method
        self.bridge_grid_points = bridge_grid_points

    def fit(self, y, X=None):
        y = as_series(y)
        report = run_test(
            y,
            ModelOrders(p=self.p, q=self.q, d=self.d),
            beta1=self.beta1,
            beta2=self.beta2,
            alphas=self.alphas,
            replications=self.replications,
            seed=self.seed,
            grid_max_points=self.grid_max_points,
            statistic_scale=self.statistic_scale,
            method=self.method,
            bridge_grid_points=self.bridge_grid_points,
        )
        self.report_ = report
        self.lr_n_ = report.lr_n
        self.p_value_ = report.p_value
        self.reject_ = report.reject
        self.critical_values_ = report.critical
        self.method_ = report.method
        self.profile_ = report.profile
        return self


def _check_fitted(estimator, attr: str) -> None:
    if not hasattr(estimator, attr):
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first"
        )
