"""Innovation generation and sample-path simulation.

Randomness is counter-based: every ``(seed, stream)`` pair addresses an
independent Philox stream, which makes parallel Monte Carlo replications
reproducible regardless of scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _recursions
from .exceptions import ValidationError
from .model import ModelOrders, TmaParams
from .validation import as_series

DISTRIBUTIONS = ("standard-normal", "student-t", "uniform-centered")

DEFAULT_BURN_IN = 200

_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class InnovationSpec:
    """Distribution, scale and stream address of an innovation sequence.

    ``sigma`` is the standard deviation of the draws for every supported
    distribution (student-t and uniform draws are standardized to unit
    variance before scaling).  ``df`` is required for ``student-t`` and must
    exceed 4 so that fourth moments exist.
    """

    distribution: str = "standard-normal"
    sigma: float = 1.0
    seed: int = 0
    stream: int = 0
    df: float | None = None

    def __post_init__(self) -> None:
        if self.distribution not in DISTRIBUTIONS:
            raise ValidationError(
                f"unknown distribution {self.distribution!r}; expected one of {DISTRIBUTIONS}"
            )
        if not (self.sigma > 0.0):
            raise ValidationError(f"sigma must be positive, got {self.sigma}")
        for name in ("seed", "stream"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 0 or value >= 2**64:
                raise ValidationError(f"{name} must be an unsigned 64-bit integer, got {value!r}")
        if self.distribution == "student-t":
            if self.df is None or not (self.df > 4.0):
                raise ValidationError(
                    f"student-t innovations need df > 4 for finite fourth moments, got {self.df}"
                )

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=[self.seed, self.stream]))


def gen_innovations(spec: InnovationSpec, n: int) -> np.ndarray:
    """Draw ``n`` i.i.d. mean-zero innovations with standard deviation ``sigma``."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    rng = spec.rng()
    if spec.distribution == "standard-normal":
        base = rng.standard_normal(n)
    elif spec.distribution == "student-t":
        df = float(spec.df)
        base = rng.standard_t(df, size=n) * math.sqrt((df - 2.0) / df)
    else:
        base = (rng.random(n) - 0.5) * (2.0 * _SQRT3)
    return spec.sigma * base


def simulate_tma(
    orders: ModelOrders,
    params: TmaParams,
    innovations: np.ndarray,
    burn_in: int = DEFAULT_BURN_IN,
) -> np.ndarray:
    """Simulate a threshold MA path driven by the given innovations.

    The recursion starts from zero pre-sample innovations and observations;
    the regime indicator only fires once the lag-``d`` observation exists.
    The first ``burn_in`` values are discarded, so the output has length
    ``len(innovations) - burn_in``.
    """
    innovations = as_series(innovations, "innovations")
    if params.p != orders.p or params.q != orders.q:
        raise ValidationError(
            f"parameter lengths (p={params.p}, q={params.q}) do not match orders "
            f"(p={orders.p}, q={orders.q})"
        )
    if params.r is None:
        raise ValidationError("simulation requires a threshold r")
    if burn_in < 0:
        raise ValidationError(f"burn_in must be >= 0, got {burn_in}")
    if innovations.size <= burn_in:
        raise ValidationError(
            f"need more than burn_in={burn_in} innovations, got {innovations.size}"
        )
    y = _recursions.simulate_path(
        innovations, params.phi, params.psi, float(params.r), orders.d
    )
    return y[burn_in:]


def simulate_ma(phi, innovations: np.ndarray, burn_in: int = DEFAULT_BURN_IN) -> np.ndarray:
    """Simulate a linear MA path (no regime shift)."""
    phi = np.atleast_1d(np.asarray(phi, dtype=np.float64))
    orders = ModelOrders(p=phi.size, q=phi.size, d=1)
    params = TmaParams(phi=phi, psi=np.zeros(phi.size), r=0.0)
    return simulate_tma(orders, params, innovations, burn_in)


def simulate_local_alternative(
    orders: ModelOrders,
    h,
    r0: float,
    n: int,
    spec: InnovationSpec,
    burn_in: int = DEFAULT_BURN_IN,
    phi=None,
) -> np.ndarray:
    """Simulate under the drifting alternative ``psi = h / sqrt(n)`` at threshold ``r0``.

    ``phi`` defaults to zeros, i.e. white noise under ``h = 0``.
    """
    h = np.atleast_1d(np.asarray(h, dtype=np.float64))
    if h.size != orders.q:
        raise ValidationError(f"h must have length q={orders.q}, got {h.size}")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    psi = h / math.sqrt(n)
    phi = np.zeros(orders.p) if phi is None else np.atleast_1d(np.asarray(phi, dtype=np.float64))
    params = TmaParams(phi=phi, psi=psi, r=float(r0))
    innovations = gen_innovations(spec, n + burn_in)
    return simulate_tma(orders, params, innovations, burn_in)
