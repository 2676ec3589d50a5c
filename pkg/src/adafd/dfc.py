"""Constant-stepsize derivative-free descent with an escalating curvature proxy.

Each iteration finds a finite-difference gradient estimate through the adaptive
interval search, then tests the candidate ``x - (kappa / C) g`` for sufficient
decrease. Failure keeps the iterate and multiplies C by r, so C climbs until
the implied stepsize ``kappa / C`` is small enough for the local curvature,
after which it stays constant. No Lipschitz constant is ever supplied.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .gradapprox import DEFAULT_I_MAX, GradScheme, adaptive_gradient
from .oracle import Array, BudgetExhausted, Objective, Oracle
from .trace import RunReport, TraceRecord


@dataclass(frozen=True)
class DfcConfig:
    x1: Array
    budget: int
    delta1: float = 0.1
    c1: float = 1.0
    theta: float = 0.5
    mu: float = 4.0
    r: float = 2.0
    kappa: float = 0.5
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
        if self.r <= 1.0:
            raise ValueError("r must exceed 1")
        if self.kappa <= 0.0:
            raise ValueError("kappa must be positive")
        if self.i_max < 1:
            raise ValueError("i_max must be positive")


@dataclass(frozen=True)
class DfcState:
    """Solver state after iteration ``k`` (k = 0 is the freshly initialized run)."""

    k: int
    x: Array
    delta: float
    C: float
    f_x: float
    last_step: str = "init"  # "accepted" | "rejected" | "stopped" | "init"
    last_g_norm: float = float("nan")
    last_tau: float = 0.0
    last_inner_steps: int = 0
    last_candidate_f: Optional[float] = None
    last_cost: int = 0  # declared oracle cost of the last step


def dfc_step(state: DfcState, oracle: Oracle, scheme: GradScheme, cfg: DfcConfig) -> DfcState:
    """Advance one iteration; raises :class:`BudgetExhausted` if cut off mid-step."""
    if state.last_step == "stopped":
        raise RuntimeError("cannot step a stopped solver state")
    dim = state.x.shape[0]
    per_call = scheme.evals_per_call(dim)

    res = adaptive_gradient(
        oracle, scheme, state.x, state.delta, state.C, cfg.mu, cfg.theta,
        nu_k=None, i_max=cfg.i_max, budget=cfg.budget,
    )
    grad_cost = (res.inner_steps + 1) * per_call
    if res.exhausted:
        return replace(
            state,
            k=state.k + 1,
            delta=res.delta_next,
            last_step="stopped",
            last_g_norm=float(np.linalg.norm(res.g)),
            last_tau=0.0,
            last_inner_steps=res.inner_steps,
            last_candidate_f=None,
            last_cost=grad_cost,
        )

    if oracle.eval_count >= cfg.budget:
        raise BudgetExhausted("budget exhausted before the decrease test", declared_cost=grad_cost)
    g = res.g
    g_norm = float(np.linalg.norm(g))
    tau = cfg.kappa / state.C
    candidate = state.x - tau * g
    f_cand = oracle.evaluate(candidate)
    threshold = state.f_x - cfg.kappa * (cfg.mu - 2.0) / (2.0 * state.C * cfg.mu) * g_norm**2
    cost = grad_cost + 1

    if f_cand <= threshold:
        return DfcState(
            k=state.k + 1,
            x=candidate,
            delta=res.delta_next,
            C=state.C,
            f_x=f_cand,
            last_step="accepted",
            last_g_norm=g_norm,
            last_tau=tau,
            last_inner_steps=res.inner_steps,
            last_candidate_f=f_cand,
            last_cost=cost,
        )
    return DfcState(
        k=state.k + 1,
        x=state.x,
        delta=res.delta_next,
        C=state.C * cfg.r,
        f_x=state.f_x,
        last_step="rejected",
        last_g_norm=g_norm,
        last_tau=0.0,
        last_inner_steps=res.inner_steps,
        last_candidate_f=f_cand,
        last_cost=cost,
    )


def dfc_run(
    objective: Objective,
    scheme: GradScheme,
    cfg: DfcConfig,
    noise_level: float = 0.0,
    seed: int = 0,
) -> RunReport:
    """Run to budget exhaustion or a near-stationarity stop; return the full trace."""
    if cfg.x1.shape != (objective.dim,):
        raise ValueError("x1 dimension does not match the objective")
    oracle = Oracle(objective, noise_level, seed)
    f1 = oracle.evaluate(cfg.x1)
    state = DfcState(k=0, x=cfg.x1.copy(), delta=cfg.delta1, C=cfg.c1, f_x=f1)
    declared = 1
    f_best = f1
    trace: list[TraceRecord] = []
    iterates = [state.x.copy()]
    termination = "budget"
    truncated = False

    while oracle.eval_count < cfg.budget:
        c_used = state.C
        try:
            state = dfc_step(state, oracle, scheme, cfg)
        except BudgetExhausted as stop:
            declared += stop.declared_cost
            truncated = True
            break
        declared += state.last_cost
        if state.last_candidate_f is not None:
            f_best = min(f_best, state.last_candidate_f)
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
        solver_id=f"dfc-{scheme.value}",
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


def _cfg_dict(cfg: DfcConfig, scheme: GradScheme) -> dict:
    return {
        "solver": "dfc",
        "scheme": scheme.value,
        "x1": [float(v) for v in cfg.x1],
        "budget": cfg.budget,
        "delta1": cfg.delta1,
        "c1": cfg.c1,
        "theta": cfg.theta,
        "mu": cfg.mu,
        "r": cfg.r,
        "kappa": cfg.kappa,
        "i_max": cfg.i_max,
    }
