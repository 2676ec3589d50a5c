"""Finite-difference gradient estimates and the shared adaptive interval search.

The adaptive search keeps the sampling interval as large as possible: starting
from the incoming radius it shrinks by a factor theta only until the estimate's
norm clears a threshold proportional to the interval itself. No knowledge of a
noise level or Lipschitz constant is required.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .oracle import Array, BudgetExhausted, Oracle

#: Default cap on the number of interval reductions in one adaptive search.
#: With theta = 1/2 the smallest interval tried is 2**-60 times the incoming
#: radius; a gradient that cannot pass the norm test by then is treated as a
#: near-stationarity signal (the exact-zero-gradient case would never pass).
DEFAULT_I_MAX = 60


class GradScheme(enum.Enum):
    """Finite-difference stencil choice, with its exact per-call oracle cost."""

    FORWARD = "forward"
    CENTRAL = "central"

    def evals_per_call(self, dim: int) -> int:
        return dim + 1 if self is GradScheme.FORWARD else 2 * dim


def forward_diff(oracle: Oracle, x: Array, delta: float) -> Array:
    """Forward-difference gradient estimate; costs exactly dim + 1 evaluations.

    The base value phi(x) is evaluated once and shared across all coordinates.
    """
    if delta <= 0:
        raise ValueError(f"sampling interval must be positive, got {delta}")
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    f0 = oracle.evaluate(x)
    g = np.empty(n)
    for i in range(n):
        xp = x.copy()
        xp[i] += delta
        g[i] = (oracle.evaluate(xp) - f0) / delta
    return g


def central_diff(oracle: Oracle, x: Array, delta: float) -> Array:
    """Central-difference gradient estimate; costs exactly 2 * dim evaluations."""
    if delta <= 0:
        raise ValueError(f"sampling interval must be positive, got {delta}")
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    g = np.empty(n)
    for i in range(n):
        xp = x.copy()
        xp[i] += delta
        xm = x.copy()
        xm[i] -= delta
        g[i] = (oracle.evaluate(xp) - oracle.evaluate(xm)) / (2.0 * delta)
    return g


def approx_gradient(oracle: Oracle, scheme: GradScheme, x: Array, delta: float) -> Array:
    if scheme is GradScheme.FORWARD:
        return forward_diff(oracle, x, delta)
    return central_diff(oracle, x, delta)


def fd_error_bound(lipschitz_const: float, dim: int, delta: float) -> float:
    """Guaranteed noiseless error bound L * sqrt(dim) * delta / 2.

    Valid for both stencils whenever the gradient is Lipschitz with constant
    ``lipschitz_const`` on the probed ball.
    """
    if lipschitz_const <= 0:
        raise ValueError("lipschitz_const must be positive")
    if delta <= 0:
        raise ValueError("delta must be positive")
    return lipschitz_const * np.sqrt(dim) * delta / 2.0


@dataclass(frozen=True)
class AdaptiveGradResult:
    """Outcome of one adaptive interval search.

    Unless ``exhausted``, the accepted estimate satisfies
    ``norm(g) > mu * c_k * delta_next`` and ``delta_next = theta**inner_steps * delta_k``.
    """

    g: Array
    delta_next: float
    inner_steps: int
    exhausted: bool


def adaptive_gradient(
    oracle: Oracle,
    scheme: GradScheme,
    x: Array,
    delta_k: float,
    c_k: float,
    mu: float,
    theta: float,
    nu_k: Optional[float] = None,
    i_max: int = DEFAULT_I_MAX,
    budget: Optional[int] = None,
) -> AdaptiveGradResult:
    """Find the largest interval theta**i * delta_k whose estimate passes the norm test.

    Tries i = 0, 1, ..., i_max. At each i the estimate is computed at interval
    ``min(theta**i * delta_k, nu_k)`` (just ``theta**i * delta_k`` when ``nu_k``
    is None), while the acceptance threshold ``mu * c_k * theta**i * delta_k``
    always uses the unclamped radius. Returns the first accepted estimate, or
    ``exhausted=True`` with the last one if no i qualifies.

    Raises :class:`BudgetExhausted` if ``budget`` would be crossed before
    starting a stencil call; the partial result (last computed estimate, if
    any) rides on the exception.
    """
    if delta_k <= 0:
        raise ValueError("delta_k must be positive")
    if c_k <= 0:
        raise ValueError("c_k must be positive")
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    if mu <= 2.0:
        raise ValueError("mu must exceed 2")
    if nu_k is not None and nu_k <= 0:
        raise ValueError("nu_k must be positive when given")

    x = np.asarray(x, dtype=float)
    g = None
    radius = delta_k
    steps = 0
    for i in range(i_max + 1):
        radius = theta**i * delta_k
        interval = radius if nu_k is None else min(radius, nu_k)
        if interval <= 0.0:
            break  # subnormal underflow; nothing smaller is evaluable
        if budget is not None and oracle.eval_count >= budget:
            partial = None
            if g is not None:
                partial = AdaptiveGradResult(g, theta ** (i - 1) * delta_k, i - 1, True)
            raise BudgetExhausted(
                "budget exhausted during interval search",
                partial=partial,
                declared_cost=i * scheme.evals_per_call(x.shape[0]),
            )
        g = approx_gradient(oracle, scheme, x, interval)
        steps = i
        if float(np.linalg.norm(g)) > mu * c_k * radius:
            return AdaptiveGradResult(g, radius, i, False)
    return AdaptiveGradResult(g, radius, steps, True)
