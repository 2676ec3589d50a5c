"""Black-box objective oracle with evaluation counting and bounded uniform noise.

Solvers only ever see an :class:`Oracle`; analytic gradients attached to an
:class:`Objective` are for validation and diagnostics and are never consulted
by any optimization loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

Array = np.ndarray


class BudgetExhausted(RuntimeError):
    """Raised when a solver would start an oracle call past its evaluation budget.

    Carries whatever partial state the interrupted operation had produced, plus
    the operation's completed oracle cost so the caller's declared-cost
    bookkeeping stays exact.
    """

    def __init__(self, message: str = "evaluation budget exhausted", partial=None,
                 declared_cost: int = 0):
        super().__init__(message)
        self.partial = partial
        self.declared_cost = declared_cost


@dataclass(frozen=True)
class Objective:
    """A deterministic scalar function on R^dim, optionally with validation extras.

    ``analytic_gradient`` and ``lipschitz_grad_constant`` are metadata for tests
    and diagnostics only; the solver-facing surface is ``Oracle.evaluate``.
    """

    dim: int
    evaluator: Callable[[Array], float]
    analytic_gradient: Optional[Callable[[Array], Array]] = None
    lipschitz_grad_constant: Optional[float] = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"objective dimension must be positive, got {self.dim}")
        if self.lipschitz_grad_constant is not None and self.lipschitz_grad_constant < 0:
            raise ValueError("lipschitz_grad_constant must be nonnegative")


@dataclass
class Oracle:
    """Counting access point to a noisy objective phi(x) = f(x) + xi(x).

    With ``noise_level`` epsilon > 0, each call adds an independent draw from
    U(-epsilon, epsilon); draws are reproducible from ``rng_seed`` and the call
    sequence (generator: numpy PCG64 via ``default_rng``). Noise is drawn per
    call, so re-evaluating the same point re-draws. With epsilon = 0 the exact
    value f(x) is returned and the generator is never advanced.

    An Oracle is single-owner mutable state: concurrent runs must construct
    independent oracles (same Objective, distinct seeds).
    """

    objective: Objective
    noise_level: float = 0.0
    rng_seed: int = 0
    eval_count: int = field(default=0, init=False)

    def __post_init__(self):
        if self.noise_level < 0:
            raise ValueError("noise_level must be nonnegative")
        self._rng = np.random.default_rng(self.rng_seed)

    def evaluate(self, x: Array) -> float:
        """Return phi(x) and advance the evaluation counter by exactly one."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.objective.dim,):
            raise ValueError(
                f"point has shape {x.shape}, objective expects ({self.objective.dim},)"
            )
        self.eval_count += 1
        value = float(self.objective.evaluator(x))
        if self.noise_level > 0.0:
            value += float(self._rng.uniform(-self.noise_level, self.noise_level))
        return value

    def reset_counter(self) -> None:
        """Zero the evaluation counter and rewind the noise stream to its seed."""
        self.eval_count = 0
        self._rng = np.random.default_rng(self.rng_seed)
