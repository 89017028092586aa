"""Tests for the sup-LR statistic, the covariance kernel and simulated limits."""

import numpy as np
import pytest
from scipy import stats

from tmatest import (
    InnovationSpec,
    KernelDegenerateError,
    KernelEstimate,
    ModelOrders,
    TmaParams,
    ValidationError,
    brownian_bridge_critical_values,
    estimate_kernel,
    fit_ma,
    gen_innovations,
    lr_profile,
    run_test,
    simulate_kernel_critical_values,
    simulate_ma,
    simulate_tma,
    threshold_grid,
)
from tmatest.lr_test import select_method

ORDERS_112 = ModelOrders(1, 1, 2)


def _ma_y(n, seed, phi=0.5):
    eps = gen_innovations(InnovationSpec(seed=seed), n + 200)
    return simulate_ma([phi], eps, 200)


def _point_kernel(values, q=1):
    """KernelEstimate on a synthetic grid with given q x q diagonal blocks."""
    values = np.atleast_3d(np.asarray(values, dtype=np.float64))
    m = values.shape[0]
    K = np.zeros((m * q, m * q))
    for i in range(m):
        K[i * q : (i + 1) * q, i * q : (i + 1) * q] = values[i]
    return KernelEstimate(
        grid=np.arange(m, dtype=np.float64),
        Sigma=np.eye(1),
        Sigma1=np.zeros((m, 1, q)),
        Sigma2=np.zeros((m, m, q, q)),
        K=K,
        q=q,
    )


class TestLrProfile:
    def test_nonnegative_under_null(self):
        y = _ma_y(400, seed=60)
        grid = threshold_grid(y, 0.1, 0.9, 40)
        prof = lr_profile(y, ORDERS_112, grid)
        assert np.all(prof.values >= -1e-8)
        assert np.isfinite(prof.lr_n)
        assert prof.lr_n == prof.values.max()

    def test_sigma2_definition(self):
        y = _ma_y(400, seed=61)
        grid = threshold_grid(y, 0.1, 0.9, 20)
        prof = lr_profile(y, ORDERS_112, grid)
        null_fit = fit_ma(y, 1)
        assert prof.sigma2_null == pytest.approx(null_fit.sse / y.size)

    def test_scale_invariance(self):
        y = _ma_y(300, seed=62)
        lr_vals = []
        for c in (0.01, 1.0, 100.0):
            grid = threshold_grid(c * y, 0.1, 0.9, 30)
            lr_vals.append(lr_profile(c * y, ORDERS_112, grid).lr_n)
        assert abs(lr_vals[0] - lr_vals[1]) <= 1e-6 * abs(lr_vals[1])
        assert abs(lr_vals[2] - lr_vals[1]) <= 1e-6 * abs(lr_vals[1])

    def test_statistic_scale_override(self):
        y = _ma_y(300, seed=63)
        grid = threshold_grid(y, 0.1, 0.9, 15)
        base = lr_profile(y, ORDERS_112, grid)
        doubled = lr_profile(y, ORDERS_112, grid, statistic_scale=2.0)
        assert doubled.lr_n == pytest.approx(2.0 * base.lr_n, rel=1e-12)

    def test_sample_size_guard(self):
        with pytest.raises(ValidationError):
            lr_profile(np.ones(30), ORDERS_112, None)


class TestEstimateKernel:
    def test_empty_regime_gives_zero_blocks(self):
        y = _ma_y(500, seed=64)
        r_low = float(y.min() - 1.0)
        kernel = estimate_kernel(y, [0.5], ORDERS_112, np.array([r_low, 0.0]))
        np.testing.assert_allclose(kernel.Sigma1[0], 0.0, atol=1e-14)
        np.testing.assert_allclose(kernel.block(0, 0), 0.0, atol=1e-14)
        np.testing.assert_allclose(kernel.Sigma2[0, 1], 0.0, atol=1e-14)

    def test_transpose_symmetry_exact(self):
        y = _ma_y(400, seed=65)
        grid = threshold_grid(y, 0.2, 0.8, 10)
        kernel = estimate_kernel(y, [0.4], ORDERS_112, grid)
        for i in range(kernel.m):
            for j in range(kernel.m):
                np.testing.assert_array_equal(kernel.block(i, j), kernel.block(j, i).T)

    def test_delayed_indicator_factorization(self):
        # With the delay exceeding the order, K(r,r) ~ Sigma * F(r)(1 - F(r)).
        y = _ma_y(5000, seed=66)
        fit = fit_ma(y, 1)
        quantiles = np.quantile(y, [0.25, 0.5, 0.75])
        kernel = estimate_kernel(y, fit.params.phi, ORDERS_112, quantiles)
        sigma = kernel.Sigma[0, 0]
        lagged = np.concatenate([np.zeros(2), y[:-2]])
        for i, r in enumerate(quantiles):
            f_hat = np.mean(lagged <= r)
            expected = sigma * f_hat * (1.0 - f_hat)
            assert kernel.block(i, i)[0, 0] == pytest.approx(expected, rel=0.15)

    def test_psd_diagonal_blocks(self):
        y = _ma_y(800, seed=67)
        grid = threshold_grid(y, 0.1, 0.9, 25)
        kernel = estimate_kernel(y, fit_ma(y, 1).params.phi, ORDERS_112, grid)
        eigs = np.linalg.eigvalsh(kernel.K)
        assert eigs.min() >= -1e-10 * max(eigs.max(), 1.0)

    def test_singular_sigma_sets_regularized_flag(self):
        # A zero series gives an identically zero score matrix.
        kernel = estimate_kernel(np.zeros(100), [0.0], ModelOrders(1, 1, 1), np.array([0.0]))
        assert kernel.regularized
        np.testing.assert_allclose(kernel.K, 0.0, atol=1e-12)


class TestSimulateKernelCriticalValues:
    def test_single_point_chi2_q1(self):
        kernel = _point_kernel(np.array([[[0.37]]]))
        cv = simulate_kernel_critical_values(kernel, (0.05,), 100_000, seed=7)
        assert abs(cv.quantiles[0] - stats.chi2.ppf(0.95, 1)) < 0.15

    def test_single_point_chi2_q2(self):
        block = np.array([[0.5, 0.1], [0.1, 0.4]])
        kernel = KernelEstimate(
            grid=np.zeros(1),
            Sigma=np.eye(1),
            Sigma1=np.zeros((1, 1, 2)),
            Sigma2=block[None, None],
            K=block,
            q=2,
        )
        cv = simulate_kernel_critical_values(kernel, (0.05,), 100_000, seed=8)
        assert abs(cv.quantiles[0] - stats.chi2.ppf(0.95, 2)) < 0.15

    def test_deterministic(self):
        kernel = _point_kernel(np.array([[[1.0]]]))
        a = simulate_kernel_critical_values(kernel, (0.10, 0.05), 5000, seed=3)
        b = simulate_kernel_critical_values(kernel, (0.10, 0.05), 5000, seed=3)
        np.testing.assert_array_equal(a.quantiles, b.quantiles)

    def test_degenerate_kernel_error(self):
        bad = np.array([[1.0, 2.0], [2.0, 1.0]])  # indefinite
        kernel = KernelEstimate(
            grid=np.arange(2.0),
            Sigma=np.eye(1),
            Sigma1=np.zeros((2, 1, 1)),
            Sigma2=np.zeros((2, 2, 1, 1)),
            K=bad,
            q=1,
        )
        with pytest.raises(KernelDegenerateError):
            simulate_kernel_critical_values(kernel, (0.05,), 1000, seed=1)

    def test_quantiles_monotone_in_alpha(self):
        kernel = _point_kernel(np.array([[[1.0]]]))
        cv = simulate_kernel_critical_values(kernel, (0.10, 0.05, 0.01), 20_000, seed=5)
        assert cv.quantiles[0] < cv.quantiles[1] < cv.quantiles[2]

    def test_minimum_replications(self):
        kernel = _point_kernel(np.array([[[1.0]]]))
        with pytest.raises(ValidationError):
            simulate_kernel_critical_values(kernel, (0.05,), 500, seed=5)


class TestBrownianBridgeCriticalValues:
    def test_tiny_interval_reduces_to_chi2_p1(self):
        cv = brownian_bridge_critical_values(1, 0.4999, 0.5001, 3, 100_000, seed=9)
        assert abs(cv.quantiles[1] - stats.chi2.ppf(0.95, 1)) < 0.15

    def test_tiny_interval_reduces_to_chi2_p2(self):
        cv = brownian_bridge_critical_values(2, 0.4999, 0.5001, 3, 100_000, seed=10)
        assert abs(cv.quantiles[1] - stats.chi2.ppf(0.95, 2)) < 0.2

    def test_deterministic(self):
        a = brownian_bridge_critical_values(1, 0.1, 0.9, 50, 5000, seed=2)
        b = brownian_bridge_critical_values(1, 0.1, 0.9, 50, 5000, seed=2)
        np.testing.assert_array_equal(a.quantiles, b.quantiles)
        np.testing.assert_array_equal(a.draws, b.draws)

    def test_refinement_tightens_the_supremum(self):
        plain = brownian_bridge_critical_values(
            1, 0.1, 0.9, 100, 20_000, seed=4, cell_refinement=False
        )
        refined = brownian_bridge_critical_values(1, 0.1, 0.9, 100, 20_000, seed=4)
        assert refined.quantiles[1] > plain.quantiles[1]

    def test_p_value_from_draws(self):
        cv = brownian_bridge_critical_values(1, 0.1, 0.9, 50, 2000, seed=6)
        assert cv.p_value(-1.0) == 1.0
        assert cv.p_value(np.inf) == 0.0
        x = float(cv.quantiles[1])
        assert cv.p_value(x) == pytest.approx(0.05, abs=0.01)


class TestRunTest:
    def test_method_selection(self):
        assert select_method(ModelOrders(1, 1, 2)) == "brownian-bridge-special-case"
        assert select_method(ModelOrders(1, 1, 1)) == "kernel-simulation"
        assert select_method(ModelOrders(2, 1, 3)) == "kernel-simulation"
        assert select_method(ModelOrders(2, 2, 3)) == "brownian-bridge-special-case"

    def test_bridge_route_report(self):
        y = _ma_y(300, seed=70)
        report = run_test(y, ORDERS_112, replications=2000, seed=1)
        assert report.method == "brownian-bridge-special-case"
        assert 0.0 <= report.p_value <= 1.0
        for a, flag in report.reject.items():
            assert flag == (report.p_value < a)

    def test_kernel_route_report(self):
        y = _ma_y(300, seed=71)
        report = run_test(y, ModelOrders(1, 1, 1), replications=2000, seed=1)
        assert report.method == "kernel-simulation"
        assert 0.0 <= report.p_value <= 1.0

    def test_scale_invariant_decisions(self):
        y = _ma_y(250, seed=72)
        base = run_test(y, ORDERS_112, replications=2000, seed=5)
        for c in (0.01, 100.0):
            scaled = run_test(c * y, ORDERS_112, replications=2000, seed=5)
            assert abs(scaled.lr_n - base.lr_n) <= 1e-6 * abs(base.lr_n)
            assert scaled.reject == base.reject

    def test_alpha_validation(self):
        with pytest.raises(ValidationError):
            run_test(_ma_y(200, seed=73), ORDERS_112, alphas=(0.0,), replications=1000)

    def test_detects_strong_threshold_effect(self):
        eps = gen_innovations(InnovationSpec(seed=74), 600)
        y = simulate_tma(ORDERS_112, TmaParams([0.5], [-0.5], r=0.0), eps, 200)
        report = run_test(y, ORDERS_112, replications=4000, seed=2)
        assert report.reject[0.05]
