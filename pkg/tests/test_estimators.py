"""Tests for the scikit-learn style estimator wrappers."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from tmatest import (
    InnovationSpec,
    ModelOrders,
    MovingAverageCLS,
    ThresholdLRTest,
    ThresholdMovingAverageCLS,
    TmaParams,
    gen_innovations,
    simulate_ma,
    simulate_tma,
)

ORDERS = ModelOrders(1, 1, 2)


def _ma_y(n=600, seed=90):
    eps = gen_innovations(InnovationSpec(seed=seed), n + 200)
    return simulate_ma([0.5], eps, 200)


def _tma_y(n=1500, seed=91):
    eps = gen_innovations(InnovationSpec(seed=seed), n + 200)
    return simulate_tma(ORDERS, TmaParams([0.5], [-0.5], r=0.0), eps, 200)


class TestMovingAverageCLS:
    def test_fit_attributes(self):
        est = MovingAverageCLS(p=1).fit(_ma_y())
        assert abs(est.phi_[0] - 0.5) < 0.12
        assert est.sigma2_ == pytest.approx(est.sse_ / est.n_)
        assert est.resid_.shape == (est.n_,)

    def test_get_params_and_clone(self):
        est = MovingAverageCLS(p=2)
        assert est.get_params() == {"p": 2}
        cloned = clone(est)
        assert cloned.get_params() == {"p": 2}

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            MovingAverageCLS().residuals(np.ones(100))

    def test_residuals_on_new_data(self):
        est = MovingAverageCLS(p=1).fit(_ma_y())
        fresh = _ma_y(seed=92)
        resid = est.residuals(fresh)
        assert resid.shape == fresh.shape


class TestThresholdMovingAverageCLS:
    def test_fit_recovers_shift(self):
        est = ThresholdMovingAverageCLS(p=1, q=1, d=2).fit(_tma_y())
        assert abs(est.phi_[0] - 0.5) < 0.15
        assert abs(est.psi_[0] + 0.5) < 0.15
        assert est.r_ in est.grid_.candidates

    def test_aic_comparison_favors_threshold_model_on_tma_data(self):
        y = _tma_y()
        ma = MovingAverageCLS(p=1).fit(y)
        tma = ThresholdMovingAverageCLS(p=1, q=1, d=2).fit(y)
        assert tma.aic_ < ma.aic_

    def test_set_params_round_trip(self):
        est = ThresholdMovingAverageCLS()
        est.set_params(d=3, beta1=0.2)
        assert est.d == 3
        assert est.beta1 == 0.2


class TestThresholdLRTest:
    def test_fit_reports(self):
        est = ThresholdLRTest(p=1, q=1, d=2, replications=2000, seed=1).fit(_ma_y())
        assert est.method_ == "brownian-bridge-special-case"
        assert 0.0 <= est.p_value_ <= 1.0
        assert set(est.reject_) == {0.10, 0.05, 0.01}

    def test_rejects_strong_alternative(self):
        est = ThresholdLRTest(p=1, q=1, d=2, replications=3000, seed=1).fit(_tma_y())
        assert est.reject_[0.05]

    def test_clone_preserves_params(self):
        est = ThresholdLRTest(replications=1234, seed=7, method="kernel")
        cloned = clone(est)
        assert cloned.replications == 1234
        assert cloned.seed == 7
        assert cloned.method == "kernel"
