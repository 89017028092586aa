"""Model orders, coefficient containers and invertibility checks.

A threshold moving-average process of orders ``(p, q, d)`` adds a shift
``psi`` to the first ``q`` moving-average coefficients whenever the
observation ``d`` steps back falls at or below a threshold ``r``.  The
residual recursion of such a model is stable exactly when the two
coefficient regimes are both contractions; everything in this module
revolves around that condition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .exceptions import ValidationError
from .validation import as_coefficients, check_positive_int

# Contractions this close to 1 are rejected: downstream expansions need a
# strict margin to stay numerically sane.
INVERTIBILITY_MARGIN = 1e-9


@dataclass(frozen=True)
class ModelOrders:
    """Orders ``(p, q, d)``: MA lag count, shifted-coefficient count, delay."""

    p: int
    q: int
    d: int = 1

    def __post_init__(self) -> None:
        check_positive_int(self.p, "p")
        check_positive_int(self.q, "q")
        check_positive_int(self.d, "d")
        if self.q > self.p:
            raise ValidationError(f"orders require p >= q, got p={self.p}, q={self.q}")


@dataclass(frozen=True)
class TmaParams:
    """Coefficient vectors ``phi`` (length p), ``psi`` (length q) and threshold ``r``.

    ``r`` may be ``None`` for plain moving-average use where no regime
    shift is involved.
    """

    phi: np.ndarray
    psi: np.ndarray = field(default_factory=lambda: np.zeros(0))
    r: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "phi", as_coefficients(self.phi, "phi"))
        object.__setattr__(self, "psi", as_coefficients(self.psi, "psi"))
        if self.r is not None:
            object.__setattr__(self, "r", float(self.r))

    @property
    def p(self) -> int:
        return self.phi.size

    @property
    def q(self) -> int:
        return self.psi.size

    def psi_padded(self) -> np.ndarray:
        """``psi`` zero-padded to length ``p``."""
        out = np.zeros(self.p)
        out[: self.q] = self.psi
        return out


@dataclass(frozen=True)
class CompanionPair:
    """Companion matrices of the two coefficient regimes.

    ``Phi`` carries ``-phi`` in its first row with an identity shift block
    below-left; ``Psi`` carries ``-psi`` (zero padded) in its first row and
    zeros elsewhere, so that ``Phi + Psi`` is the companion matrix of the
    shifted regime.
    """

    Phi: np.ndarray
    Psi: np.ndarray


class InvertibilityCheck(NamedTuple):
    ok: bool
    a: float


def check_invertibility(phi, psi=()) -> InvertibilityCheck:
    """Check the two-regime contraction condition.

    Computes ``a = max(sum |phi_i|, sum |phi_i + psi_i|)`` with ``psi``
    zero-padded to the length of ``phi``.  The residual recursion admits a
    convergent expansion in past observations iff ``a < 1``.

    Returns
    -------
    InvertibilityCheck
        ``(ok, a)`` where ``ok`` is True when ``a`` is below 1 with a small
        safety margin.
    """
    phi = as_coefficients(phi, "phi")
    psi = as_coefficients(psi, "psi")
    if phi.size == 0:
        raise ValidationError("phi must be nonempty")
    if psi.size > phi.size:
        raise ValidationError(
            f"psi cannot be longer than phi, got lengths {psi.size} > {phi.size}"
        )
    padded = np.zeros(phi.size)
    padded[: psi.size] = psi
    a = max(np.sum(np.abs(phi)), np.sum(np.abs(phi + padded)))
    return InvertibilityCheck(ok=bool(a < 1.0 - INVERTIBILITY_MARGIN), a=float(a))


def companion_matrices(params: TmaParams, orders: ModelOrders) -> CompanionPair:
    """Build the companion matrices for ``params`` at the given orders."""
    if params.p != orders.p:
        raise ValidationError(f"phi has length {params.p}, expected p={orders.p}")
    if params.q != orders.q:
        raise ValidationError(f"psi has length {params.q}, expected q={orders.q}")
    p = orders.p
    Phi = np.zeros((p, p))
    Phi[0, :] = -params.phi
    if p > 1:
        Phi[1:, :-1] = np.eye(p - 1)
    Psi = np.zeros((p, p))
    Psi[0, :] = -params.psi_padded()
    return CompanionPair(Phi=Phi, Psi=Psi)


def product_norm_sequence(pair: CompanionPair, indicators) -> np.ndarray:
    """Norms of the running regime-matrix products.

    Entry ``j`` (0-based ``j-1``) is the max-absolute-row-sum norm of
    ``prod_{i=1}^{j} [Phi + Psi * indicators[i-1]]``.  Under the contraction
    condition the sequence decays like ``a**floor(j/p)``.
    """
    phi = -pair.Phi[0, :]
    psi = -pair.Psi[0, :]
    ok, a = check_invertibility(phi, psi)
    if not ok:
        raise ValidationError(f"parameters are not invertible (a={a:.6g})")
    indicators = np.asarray(indicators)
    shifted = pair.Phi + pair.Psi
    norms = np.empty(indicators.size)
    prod = np.eye(pair.Phi.shape[0])
    for j, flag in enumerate(indicators):
        prod = prod @ (shifted if flag else pair.Phi)
        norms[j] = np.linalg.norm(prod, np.inf)
    return norms
