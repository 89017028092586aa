"""Monte Carlo size and power experiments.

Each replication owns a counter-based random stream derived from the
experiment's base seed, so reports are identical for a given seed no
matter how many workers run the replications.  Stream numbers below 2**48
address replications; higher blocks are reserved for the shared and
per-replication critical-value simulations.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from .exceptions import ExperimentError, TmaTestError, ValidationError
from .lr_test import (
    CriticalValues,
    brownian_bridge_critical_values,
    run_test,
    select_method,
    DEFAULT_BRIDGE_GRID_POINTS,
    DEFAULT_STATISTIC_SCALE,
)
from .model import ModelOrders, TmaParams
from .simulate import DEFAULT_BURN_IN, InnovationSpec, gen_innovations, simulate_tma

DESIGNS = ("null-ma", "tma-alternative", "local-alternative")

# Stream layout: replication k simulates data on stream k and (for the
# kernel method) simulates its critical values on _KERNEL_STREAM_BASE + k;
# the shared bridge distribution uses _BRIDGE_STREAM.
_KERNEL_STREAM_BASE = 2**48
_BRIDGE_STREAM = 2**49

MAX_FAILURE_FRACTION = 0.01


@dataclass(frozen=True)
class ExperimentConfig:
    """One size/power experiment: a design, true parameters and test settings."""

    design: str
    orders: ModelOrders
    n: int
    replications: int
    phi: tuple = ()
    psi: tuple = ()
    h: tuple = ()
    r0: float = 0.0
    beta1: float = 0.1
    beta2: float = 0.9
    alphas: tuple = (0.10, 0.05)
    base_seed: int = 0
    distribution: str = "standard-normal"
    sigma: float = 1.0
    df: float | None = None
    burn_in: int = DEFAULT_BURN_IN
    grid_max_points: int = 60
    statistic_scale: float = DEFAULT_STATISTIC_SCALE
    bridge_replications: int = 25_000
    kernel_replications: int = 2_000
    bridge_grid_points: int = DEFAULT_BRIDGE_GRID_POINTS

    def __post_init__(self) -> None:
        if self.design not in DESIGNS:
            raise ValidationError(f"unknown design {self.design!r}; expected one of {DESIGNS}")
        if self.replications < 1:
            raise ValidationError(f"replications must be >= 1, got {self.replications}")
        if self.n < 50:
            raise ValidationError(f"n must be >= 50, got {self.n}")
        object.__setattr__(self, "phi", tuple(float(v) for v in self.phi))
        object.__setattr__(self, "psi", tuple(float(v) for v in self.psi))
        object.__setattr__(self, "h", tuple(float(v) for v in self.h))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if len(self.phi) != self.orders.p:
            raise ValidationError(
                f"phi must have length p={self.orders.p}, got {len(self.phi)}"
            )
        if self.design == "tma-alternative" and len(self.psi) != self.orders.q:
            raise ValidationError(
                f"design {self.design!r} needs psi of length q={self.orders.q}"
            )
        if self.design == "local-alternative" and len(self.h) != self.orders.q:
            raise ValidationError(
                f"design {self.design!r} needs h of length q={self.orders.q}"
            )


@dataclass(frozen=True)
class ExperimentReport:
    """Aggregated rejection rates with their Monte Carlo standard errors."""

    config: ExperimentConfig
    rejection_rates: dict
    mc_stderr: dict
    failures: int
    wall_time: float

    @property
    def replications(self) -> int:
        return self.config.replications


def _true_psi(config: ExperimentConfig) -> np.ndarray:
    if config.design == "null-ma":
        return np.zeros(config.orders.q)
    if config.design == "tma-alternative":
        return np.asarray(config.psi, dtype=np.float64)
    return np.asarray(config.h, dtype=np.float64) / math.sqrt(config.n)


def _one_replication(config: ExperimentConfig, k: int, shared: CriticalValues | None):
    spec = InnovationSpec(
        distribution=config.distribution,
        sigma=config.sigma,
        seed=config.base_seed,
        stream=k,
        df=config.df,
    )
    innovations = gen_innovations(spec, config.n + config.burn_in)
    params = TmaParams(
        phi=np.asarray(config.phi, dtype=np.float64),
        psi=_true_psi(config),
        r=config.r0,
    )
    y = simulate_tma(config.orders, params, innovations, config.burn_in)
    report = run_test(
        y,
        config.orders,
        beta1=config.beta1,
        beta2=config.beta2,
        alphas=config.alphas,
        replications=config.kernel_replications,
        seed=config.base_seed,
        stream=_KERNEL_STREAM_BASE + k,
        grid_max_points=config.grid_max_points,
        statistic_scale=config.statistic_scale,
        critical=shared,
    )
    return [report.reject[a] for a in config.alphas]


def run_experiment(config: ExperimentConfig, threads: int = 1) -> ExperimentReport:
    """Run all replications of one experiment and aggregate rejection rates.

    Individual replication failures are tolerated up to 1% of the total;
    beyond that the experiment aborts.
    """
    start = time.perf_counter()
    shared = None
    if select_method(config.orders) == "brownian-bridge-special-case":
        # Mirrors the construction run_test would use per replication.
        shared = brownian_bridge_critical_values(
            config.orders.p,
            config.beta1,
            config.beta2,
            config.bridge_grid_points,
            config.bridge_replications,
            seed=config.base_seed,
            stream=_BRIDGE_STREAM,
            cell_refinement=False,
        )

    def worker(k: int):
        try:
            return _one_replication(config, k, shared)
        except (TmaTestError, np.linalg.LinAlgError):
            return None

    if threads is not None and threads > 1:
        results = Parallel(n_jobs=threads)(
            delayed(worker)(k) for k in range(config.replications)
        )
    else:
        results = [worker(k) for k in range(config.replications)]

    failures = sum(1 for res in results if res is None)
    if failures > MAX_FAILURE_FRACTION * config.replications:
        raise ExperimentError(
            f"{failures} of {config.replications} replications failed "
            f"(more than {MAX_FAILURE_FRACTION:.0%})"
        )
    kept = np.array([res for res in results if res is not None], dtype=float)
    rates = kept.mean(axis=0)
    n_kept = kept.shape[0]
    rejection_rates = {a: float(r) for a, r in zip(config.alphas, rates)}
    mc_stderr = {
        a: float(math.sqrt(r * (1.0 - r) / n_kept)) for a, r in rejection_rates.items()
    }
    return ExperimentReport(
        config=config,
        rejection_rates=rejection_rates,
        mc_stderr=mc_stderr,
        failures=failures,
        wall_time=time.perf_counter() - start,
    )


def power_curve(configs, threads: int = 1) -> list[ExperimentReport]:
    """Run a list of experiments in order."""
    configs = list(configs)
    if not configs:
        raise ValidationError("need at least one experiment configuration")
    return [run_experiment(c, threads=threads) for c in configs]


def config_from_dict(entry: dict, defaults: dict | None = None) -> ExperimentConfig:
    """Build an ExperimentConfig from one config-file entry plus shared defaults."""
    merged = dict(defaults or {})
    merged.update(entry)
    try:
        orders = ModelOrders(
            p=int(merged.pop("p")), q=int(merged.pop("q")), d=int(merged.pop("d"))
        )
        design = merged.pop("design")
        n = int(merged.pop("n"))
        replications = int(merged.pop("replications"))
    except KeyError as exc:
        raise ValidationError(f"experiment entry is missing required key {exc}") from exc
    known = {
        "phi", "psi", "h", "r0", "beta1", "beta2", "alphas", "base_seed",
        "distribution", "sigma", "df", "burn_in", "grid_max_points",
        "statistic_scale", "bridge_replications", "kernel_replications",
        "bridge_grid_points",
    }
    unknown = set(merged) - known
    if unknown:
        raise ValidationError(f"unknown experiment config keys: {sorted(unknown)}")
    return ExperimentConfig(
        design=design, orders=orders, n=n, replications=replications, **merged
    )


def load_experiment_file(path) -> list[ExperimentConfig]:
    """Read a JSON experiment file: shared defaults plus an ``experiments`` list."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed experiment config {path}: {exc}") from exc
    if not isinstance(payload, dict) or "experiments" not in payload:
        raise ValidationError(f"experiment config {path} must contain an 'experiments' list")
    entries = payload["experiments"]
    if not isinstance(entries, list) or not entries:
        raise ValidationError(f"experiment config {path} has no experiments")
    defaults = {k: v for k, v in payload.items() if k != "experiments"}
    return [config_from_dict(dict(entry), defaults) for entry in entries]
