"""Per-iteration trace records, run reports, and lossless CSV persistence."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .oracle import Array

#: Fixed CSV column order; floats are written in shortest round-trip form.
CSV_COLUMNS = (
    "iter",
    "evals",
    "f_current",
    "f_best",
    "grad_norm_approx",
    "delta",
    "C",
    "tau",
    "step_status",
)


@dataclass(frozen=True)
class TraceRecord:
    """One solver iteration: budget position, values, and step bookkeeping.

    Fields that have no meaning for a given solver (e.g. ``C`` for Nelder-Mead)
    are recorded as NaN.
    """

    iter: int
    evals: int
    f_current: float
    f_best: float
    grad_norm_approx: float
    delta: float
    C: float
    tau: float
    step_status: str


@dataclass
class RunReport:
    """Full outcome of one solver run on one oracle."""

    solver_id: str
    trace: List[TraceRecord]
    final_x: Array
    best_f: float
    evals: int
    declared_evals: int
    budget: int
    termination: str  # "budget" | "stationary" | "schedule" | "complete"
    truncated: bool = False  # final step cut off mid-operation at the budget edge
    final_C: Optional[float] = None
    tau_sum: Optional[float] = None
    iterates: List[Array] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def final_f_best(self) -> float:
        return self.trace[-1].f_best if self.trace else self.best_f


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def emit_csv(trace: List[TraceRecord], path) -> None:
    """Write a trace as a header row plus one row per record.

    Re-emitting the same trace yields a byte-identical file, and reading it
    back reproduces every finite value exactly.
    """
    if not trace:
        raise ValueError("refusing to emit an empty trace")
    lines = [",".join(CSV_COLUMNS)]
    for rec in trace:
        lines.append(",".join(_fmt(getattr(rec, col)) for col in CSV_COLUMNS))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path) -> List[TraceRecord]:
    """Parse a trace file written by :func:`emit_csv`."""
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln]
    if not lines or lines[0] != ",".join(CSV_COLUMNS):
        raise ValueError(f"{path}: unrecognized trace header")
    out = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(CSV_COLUMNS):
            raise ValueError(f"{path}: malformed row {ln!r}")
        out.append(
            TraceRecord(
                iter=int(parts[0]),
                evals=int(parts[1]),
                f_current=float(parts[2]),
                f_best=float(parts[3]),
                grad_norm_approx=float(parts[4]),
                delta=float(parts[5]),
                C=float(parts[6]),
                tau=float(parts[7]),
                step_status=parts[8],
            )
        )
    return out


def records_equal(a: TraceRecord, b: TraceRecord) -> bool:
    """Field-wise equality that treats NaN as equal to NaN."""
    for col in CSV_COLUMNS:
        va, vb = getattr(a, col), getattr(b, col)
        if isinstance(va, float) and isinstance(vb, float):
            if math.isnan(va) and math.isnan(vb):
                continue
            if va != vb:
                return False
        elif va != vb:
            return False
    return True
