"""Backtracking-stepsize derivative-free descent with a shrinking linesearch floor.

The linesearch restarts from tau_bar every iteration and halts either when the
sufficient-decrease test passes or when the trial step falls below the current
floor t_min. A floor hit is a null step: the iterate freezes while C grows by
eta and the floor shrinks by gamma, exactly one coupled pair per null step.
Designed for objectives whose gradient is only locally Lipschitz, so a
per-iteration error cap nu_k (decreasing to zero) caps the sampling interval.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .gradapprox import DEFAULT_I_MAX, GradScheme, adaptive_gradient
from .oracle import Array, BudgetExhausted, Objective, Oracle
from .trace import RunReport, TraceRecord

NuRule = Union[Callable[[int], float], Sequence[float], None]


class NuExhausted(Exception):
    """A finite nu sequence ran out before the run did."""


@dataclass(frozen=True)
class DfbConfig:
    x1: Array
    budget: int
    delta1: float = 0.1
    c1: float = 1.0
    theta: float = 0.5
    mu: float = 4.0
    eta: float = 2.0
    beta: float = 0.25
    gamma: float = 0.5
    tau_bar: float = 1.0
    t_min1: float = 1e-10
    nu: NuRule = None  # default: harmonic decay delta1 / k
    i_max: int = DEFAULT_I_MAX

    def __post_init__(self):
        object.__setattr__(self, "x1", np.asarray(self.x1, dtype=float))
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")
        if self.delta1 <= 0:
            raise ValueError("delta1 must be positive")
        if self.c1 <= 0:
            raise ValueError("c1 must be positive")
        if not 0.0 < self.theta < 1.0:
            raise ValueError("theta must lie in (0, 1)")
        if self.mu <= 2.0:
            raise ValueError("mu must exceed 2")
        if self.eta <= 1.0:
            raise ValueError("eta must exceed 1")
        if not 0.0 < self.beta < 0.5:
            raise ValueError("beta must lie strictly inside (0, 1/2)")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie in (0, 1)")
        if self.tau_bar <= 0:
            raise ValueError("tau_bar must be positive")
        if not 0.0 < self.t_min1 < self.tau_bar:
            raise ValueError("t_min1 must lie in (0, tau_bar)")
        if self.i_max < 1:
            raise ValueError("i_max must be positive")

    def nu_at(self, k: int) -> float:
        """Error cap for iteration k (1-based); must be positive and decrease to 0."""
        if self.nu is None:
            return self.delta1 / k
        if callable(self.nu):
            value = float(self.nu(k))
        else:
            if k - 1 >= len(self.nu):
                raise NuExhausted(f"nu sequence exhausted at iteration {k}")
            value = float(self.nu[k - 1])
        if value <= 0:
            raise ValueError(f"nu must stay positive, got {value} at iteration {k}")
        return value


@dataclass(frozen=True)
class BacktrackResult:
    t: float
    sufficient: bool
    evals_used: int
    f_candidate: float  # value tested at the returned t
    min_f_seen: float   # best candidate value seen across the whole search


def backtrack(
    oracle: Oracle,
    x: Array,
    g: Array,
    f_x: float,
    beta: float,
    gamma: float,
    tau_bar: float,
    t_min: float,
    budget: Optional[int] = None,
) -> BacktrackResult:
    """Shrink t from tau_bar by gamma until sufficient decrease or the floor.

    The compound exit condition checks the decrease test first, then the floor:
    every loop pass costs one oracle evaluation, the search can therefore end
    below the floor with the decrease test satisfied (the caller still treats
    that as a floor hit), and ``sufficient`` reports the last evaluated test.
    """
    if not 0.0 < t_min < tau_bar:
        raise ValueError("need 0 < t_min < tau_bar")
    g_norm_sq = float(g @ g)
    if g_norm_sq <= 0.0:
        raise ValueError("backtracking requires a nonzero direction")
    t = tau_bar
    evals = 0
    min_f = np.inf
    while True:
        if budget is not None and oracle.eval_count >= budget:
            raise BudgetExhausted("budget exhausted during linesearch", declared_cost=evals)
        f_cand = oracle.evaluate(x - t * g)
        evals += 1
        min_f = min(min_f, f_cand)
        if f_cand <= f_x - beta * t * g_norm_sq:
            return BacktrackResult(t, True, evals, f_cand, min_f)
        if t < t_min:
            return BacktrackResult(t, False, evals, f_cand, min_f)
        t *= gamma


@dataclass(frozen=True)
class DfbState:
    k: int
    x: Array
    delta: float
    C: float
    t_min: float
    f_x: float
    last_step: str = "init"  # "accepted" | "null" | "stopped" | "init"
    last_g_norm: float = float("nan")
    last_tau: float = 0.0
    last_inner_steps: int = 0
    last_min_candidate_f: Optional[float] = None
    last_cost: int = 0


def dfb_step(state: DfbState, oracle: Oracle, scheme: GradScheme, cfg: DfbConfig) -> DfbState:
    """Advance one iteration; raises :class:`BudgetExhausted` if cut off mid-step."""
    if state.last_step == "stopped":
        raise RuntimeError("cannot step a stopped solver state")
    k = state.k + 1
    per_call = scheme.evals_per_call(state.x.shape[0])

    res = adaptive_gradient(
        oracle, scheme, state.x, state.delta, state.C, cfg.mu, cfg.theta,
        nu_k=cfg.nu_at(k), i_max=cfg.i_max, budget=cfg.budget,
    )
    grad_cost = (res.inner_steps + 1) * per_call
    if res.exhausted:
        return replace(
            state,
            k=k,
            delta=res.delta_next,
            last_step="stopped",
            last_g_norm=float(np.linalg.norm(res.g)),
            last_tau=0.0,
            last_inner_steps=res.inner_steps,
            last_min_candidate_f=None,
            last_cost=grad_cost,
        )

    g = res.g
    try:
        ls = backtrack(
            oracle, state.x, g, state.f_x, cfg.beta, cfg.gamma, cfg.tau_bar,
            state.t_min, budget=cfg.budget,
        )
    except BudgetExhausted as stop:
        stop.declared_cost += grad_cost
        raise
    cost = grad_cost + ls.evals_used
    g_norm = float(np.linalg.norm(g))

    if ls.t >= state.t_min:
        # the floor was never crossed, so the exit must have been a passed test
        return DfbState(
            k=k,
            x=state.x - ls.t * g,
            delta=res.delta_next,
            C=state.C,
            t_min=state.t_min,
            f_x=ls.f_candidate,
            last_step="accepted",
            last_g_norm=g_norm,
            last_tau=ls.t,
            last_inner_steps=res.inner_steps,
            last_min_candidate_f=ls.min_f_seen,
            last_cost=cost,
        )
    return DfbState(
        k=k,
        x=state.x,
        delta=res.delta_next,
        C=state.C * cfg.eta,
        t_min=state.t_min * cfg.gamma,
        f_x=state.f_x,
        last_step="null",
        last_g_norm=g_norm,
        last_tau=0.0,
        last_inner_steps=res.inner_steps,
        last_min_candidate_f=ls.min_f_seen,
        last_cost=cost,
    )


def dfb_run(
    objective: Objective,
    scheme: GradScheme,
    cfg: DfbConfig,
    noise_level: float = 0.0,
    seed: int = 0,
) -> RunReport:
    """Run to budget exhaustion or a near-stationarity stop; return the full trace."""
    if cfg.x1.shape != (objective.dim,):
        raise ValueError("x1 dimension does not match the objective")
    oracle = Oracle(objective, noise_level, seed)
    f1 = oracle.evaluate(cfg.x1)
    state = DfbState(
        k=0, x=cfg.x1.copy(), delta=cfg.delta1, C=cfg.c1, t_min=cfg.t_min1, f_x=f1
    )
    declared = 1
    f_best = f1
    trace: list[TraceRecord] = []
    iterates = [state.x.copy()]
    termination = "budget"
    truncated = False

    while oracle.eval_count < cfg.budget:
        c_used = state.C
        try:
            state = dfb_step(state, oracle, scheme, cfg)
        except BudgetExhausted as stop:
            declared += stop.declared_cost
            truncated = True
            break
        except NuExhausted:
            termination = "schedule"
            break
        declared += state.last_cost
        if state.last_min_candidate_f is not None:
            f_best = min(f_best, state.last_min_candidate_f)
        trace.append(
            TraceRecord(
                iter=state.k,
                evals=oracle.eval_count,
                f_current=state.f_x,
                f_best=f_best,
                grad_norm_approx=state.last_g_norm,
                delta=state.delta,
                C=c_used,  # the value the iteration ran with, pre-escalation
                tau=state.last_tau,
                step_status=state.last_step,
            )
        )
        iterates.append(state.x.copy())
        if state.last_step == "stopped":
            termination = "stationary"
            break

    return RunReport(
        solver_id=f"dfb-{scheme.value}",
        trace=trace,
        final_x=state.x.copy(),
        best_f=f_best,
        evals=oracle.eval_count,
        declared_evals=declared,
        budget=cfg.budget,
        termination=termination,
        truncated=truncated,
        final_C=state.C,
        iterates=iterates,
        config=_cfg_dict(cfg, scheme),
    )


def _cfg_dict(cfg: DfbConfig, scheme: GradScheme) -> dict:
    return {
        "solver": "dfb",
        "scheme": scheme.value,
        "x1": [float(v) for v in cfg.x1],
        "budget": cfg.budget,
        "delta1": cfg.delta1,
        "c1": cfg.c1,
        "theta": cfg.theta,
        "mu": cfg.mu,
        "eta": cfg.eta,
        "beta": cfg.beta,
        "gamma": cfg.gamma,
        "tau_bar": cfg.tau_bar,
        "t_min1": cfg.t_min1,
        "nu": "harmonic(delta1/k)" if cfg.nu is None else "custom",
        "i_max": cfg.i_max,
    }
