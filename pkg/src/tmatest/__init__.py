"""Simulation, estimation and sup-LR threshold testing for moving-average models."""

from .diagnostics import PortmanteauResult, acf, aic, ljung_box
from .estimate import (
    FitResult,
    ProfileResult,
    ThresholdGrid,
    fit_ma,
    fit_tma_fixed_r,
    profile_threshold,
    threshold_grid,
)
from .estimators import MovingAverageCLS, ThresholdLRTest, ThresholdMovingAverageCLS
from .exceptions import (
    DataError,
    ExperimentError,
    KernelDegenerateError,
    NumericalError,
    TmaTestError,
    ValidationError,
)
from .lr_test import (
    CriticalValues,
    KernelEstimate,
    LrProfile,
    TestReport,
    brownian_bridge_critical_values,
    estimate_kernel,
    lr_profile,
    run_test,
    simulate_kernel_critical_values,
)
from .mc import ExperimentConfig, ExperimentReport, power_curve, run_experiment
from .model import (
    CompanionPair,
    ModelOrders,
    TmaParams,
    check_invertibility,
    companion_matrices,
    product_norm_sequence,
)
from .residuals import (
    ResidualSet,
    ScoreSet,
    residuals_ma,
    residuals_tma,
    residuals_via_expansion,
    score_ma,
    score_tma,
    sse,
)
from .simulate import (
    InnovationSpec,
    gen_innovations,
    simulate_local_alternative,
    simulate_ma,
    simulate_tma,
)

__version__ = "0.1.0"

__all__ = [
    "CompanionPair",
    "CriticalValues",
    "DataError",
    "ExperimentConfig",
    "ExperimentError",
    "ExperimentReport",
    "FitResult",
    "InnovationSpec",
    "KernelDegenerateError",
    "KernelEstimate",
    "LrProfile",
    "ModelOrders",
    "MovingAverageCLS",
    "NumericalError",
    "PortmanteauResult",
    "ProfileResult",
    "ResidualSet",
    "ScoreSet",
    "TestReport",
    "ThresholdGrid",
    "ThresholdLRTest",
    "ThresholdMovingAverageCLS",
    "TmaParams",
    "TmaTestError",
    "ValidationError",
    "acf",
    "aic",
    "brownian_bridge_critical_values",
    "check_invertibility",
    "companion_matrices",
    "estimate_kernel",
    "fit_ma",
    "fit_tma_fixed_r",
    "gen_innovations",
    "ljung_box",
    "lr_profile",
    "power_curve",
    "product_norm_sequence",
    "profile_threshold",
    "residuals_ma",
    "residuals_tma",
    "residuals_via_expansion",
    "run_experiment",
    "run_test",
    "score_ma",
    "score_tma",
    "simulate_kernel_critical_values",
    "simulate_local_alternative",
    "simulate_ma",
    "simulate_tma",
    "sse",
    "threshold_grid",
]
