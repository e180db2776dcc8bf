"""Per-t tables over the coset channel, exact with a Monte Carlo fallback."""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .channel import DiscreteChannel, capacity_uniform, standardize, symmetry_group
from .coset import (
    CosetAnalysis,
    analyze_coset,
    coset_channel,
    exact_terms,
    hypotheses,
    ser_bound_case,
    ser_hypotheses,
    weak_bound_check,
)
from .exceptions import TooLargeForExact
from .grm import LinearCode
from .montecarlo import mc_coset
from .numeric import Number, format_number
from .perm import Transitivity, transitivity

logger = logging.getLogger("grmlab")

SCHEMA_VERSION = 1
SCAN_COLUMNS = (
    "t",
    "delta",
    "delta_ci_lo",
    "delta_ci_hi",
    "trQ",
    "ser",
    "ser_bound",
    "exit",
    "weak_bound",
    "hypothesis_flags",
    "schema_version",
)


class ScanMode(str, Enum):
    EXACT = "exact"
    MC = "mc"


@dataclass(frozen=True)
class ScanRow:
    t: Number
    delta: Number
    delta_ci_lo: Number
    delta_ci_hi: Number
    trace: Number
    ser: Number
    ser_bound: Optional[float]
    exit: Optional[float]
    weak_bound: Optional[float]
    flags: str

    def as_record(self) -> Dict[str, Any]:
        def cell(value: Any) -> Any:
            return "" if value is None else format_number(value)

        return {
            "t": cell(self.t),
            "delta": cell(self.delta),
            "delta_ci_lo": cell(self.delta_ci_lo),
            "delta_ci_hi": cell(self.delta_ci_hi),
            "trQ": cell(self.trace),
            "ser": cell(self.ser),
            "ser_bound": cell(self.ser_bound),
            "exit": cell(self.exit),
            "weak_bound": cell(self.weak_bound),
            "hypothesis_flags": self.flags,
            "schema_version": SCHEMA_VERSION,
        }


@dataclass(frozen=True, eq=False)
class ScanResult:
    mode: ScanMode
    rows: List[ScanRow]
    delta_avg: Optional[Number]
    polynomials: Dict[str, List[Any]] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode.value,
            "schema_version": SCHEMA_VERSION,
            "delta_avg": None if self.delta_avg is None else format_number(self.delta_avg),
            "polynomials": self.polynomials,
            "warnings": self.warnings,
            "rows": [row.as_record() for row in self.rows],
        }


def exact_scan(code: LinearCode, channel: DiscreteChannel, grid: Sequence[Number]) -> ScanResult:
    a: CosetAnalysis = analyze_coset(code, channel)
    hyp = hypotheses(code, a.channel, a.capacity)
    ser_rep = ser_hypotheses(code, channel, a)
    flags = [hyp.flags()]
    if ser_rep.applicable:
        flags.append(f"ser_bound:{ser_rep.case}")
    rows = []
    for t in grid:
        weak = weak_bound_check(code, channel, t, analysis=a, assumptions=hyp)
        d = a.delta(t)
        extra = ["weak_bound_range"] if weak.in_range else []
        row_flags = ";".join(f for f in flags + extra if f)
        rows.append(
            ScanRow(
                t=t,
                delta=d,
                delta_ci_lo=d,
                delta_ci_hi=d,
                trace=a.trace(t),
                ser=a.ser(t),
                ser_bound=ser_rep.bound,
                exit=float(a.exit_poly(float(t))),
                weak_bound=weak.lower_bound if weak.in_range else None,
                flags=row_flags,
            )
        )
    polys = {
        "delta": [format_number(c) for c in a.delta_poly.coefficients],
        "trQ": [format_number(c) for c in a.trace_poly.coefficients],
        "ser": [format_number(c) for c in a.ser_poly.coefficients],
        "exit": [format_number(c) for c in a.exit_poly.coefficients],
    }
    return ScanResult(mode=ScanMode.EXACT, rows=rows, delta_avg=a.delta_avg(), polynomials=polys)


def _coset_transitivity(code: LinearCode, channel: DiscreteChannel) -> Optional[Transitivity]:
    """Transitivity of the symmetry group of V, or None past the exact budget."""
    try:
        return transitivity(symmetry_group(coset_channel(code, channel)))
    except TooLargeForExact:
        return None


def _mc_scan(
    code: LinearCode,
    channel: DiscreteChannel,
    grid: Sequence[Number],
    samples: int,
    seed: int,
    workers: int,
    warnings: List[str],
) -> ScanResult:
    base = standardize(channel).as_channel()
    cap = capacity_uniform(base)
    r = float(code.rate)
    reports = [mc_coset(code, base, float(t), samples, seed=seed, workers=workers) for t in grid]
    ts = np.array([float(t) for t in grid])
    delta_avg: Optional[float] = None
    flags = ["mc"] + (["r_lt_c"] if cap > r else [])
    ser_bound: Optional[float] = None
    # Conservative delta_avg from the upper interval ends when the grid spans [0, 1]
    if len(ts) > 1 and ts.min() == 0.0 and ts.max() == 1.0 and np.all(np.diff(ts) > 0):
        his = np.array([rep.delta_ci.hi for rep in reports])
        delta_avg = float(np.sum((his[1:] + his[:-1]) / 2 * np.diff(ts)))
        kind = _coset_transitivity(code, channel) if cap > r else None
        found = ser_bound_case(code.q, cap, r, delta_avg, kind)
        ser_bound = found.bound
        if found.case != "not_applicable":
            flags.append(f"ser_bound:{found.case}")
    rows = []
    for t, rep in zip(grid, reports):
        tf = float(t)
        in_range = cap > r and tf < 1 - r / cap
        rows.append(
            ScanRow(
                t=t,
                delta=rep.delta,
                delta_ci_lo=rep.delta_ci.lo,
                delta_ci_hi=rep.delta_ci.hi,
                trace=rep.trace,
                ser=rep.ser,
                ser_bound=ser_bound,
                exit=None,
                weak_bound=code.q ** (cap - r / (1 - tf)) if in_range else None,
                flags=";".join(flags),
            )
        )
    return ScanResult(mode=ScanMode.MC, rows=rows, delta_avg=delta_avg, warnings=warnings)


def coset_scan(
    code: LinearCode,
    channel: DiscreteChannel,
    grid: Sequence[Number],
    mode: ScanMode = ScanMode.EXACT,
    samples: int = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> ScanResult:
    """One row per t. Exact mode falls back to Monte Carlo above the budget."""
    mode = ScanMode(mode)
    if mode is ScanMode.EXACT:
        try:
            return exact_scan(code, channel, grid)
        except TooLargeForExact as exc:
            n_out = standardize(channel).n_atoms
            logger.warning(
                json.dumps(
                    {
                        "event": "exact_budget_exceeded",
                        "terms": exact_terms(code, n_out),
                        "message": exc.message,
                    }
                )
            )
            note = f"exact mode unavailable: {exc.message}"
            return _mc_scan(code, channel, grid, samples, seed, workers, [note])
    return _mc_scan(code, channel, grid, samples, seed, workers, [])
