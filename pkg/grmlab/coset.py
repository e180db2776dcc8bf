"""Exact analysis of the coset channel V_t.

The erasure family is handled by pattern expansion: for every set K of
unerased positions among 1..N-1 the channel from X_0 to Y_K is the coset
channel of the punctured code on {0} + K, and every per-t quantity that is
additive over disjoint output blocks becomes an ErasurePolynomial.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .channel import (
    DiscreteChannel,
    OverlapReport,
    capacity_uniform,
    discrepancy_from_definition,
    erasure_compose,
    overlap_from_matrix,
    standardize,
    symmetry_group,
)
from .config import get_settings
from .erasure import ErasurePolynomial, pattern_sum
from .exceptions import InputSizeMismatch, TooLargeForExact, TOutOfRange
from .gf import is_prime
from .grm import LinearCode, check_position_zero, code_transitivity, relabel_group
from .numeric import (
    Number,
    entropy,
    exact_like,
    format_number,
    is_exact,
    is_exact_scalar,
    le,
    to_float,
)
from .perm import (
    NamedGroup,
    PermGroup,
    Transitivity,
    contains_subgroup,
    intersect,
    join,
    named_group,
    transitivity,
)

logger = logging.getLogger("grmlab")

# Codewords processed per vectorized block when building likelihood tables
_CHUNK_ENTRIES = 2**22


# --- Likelihood tables ---


def likelihood_table(
    words: np.ndarray,
    wmat: np.ndarray,
    positions: Sequence[int],
    key_positions: Sequence[int] = (0,),
) -> Tuple[np.ndarray, np.ndarray]:
    """Group codewords by their symbols at ``key_positions`` and sum
    prod_{i in positions} W(y_i | c_i) over each group.

    Returns (keys, table) with table[g, y]; outputs y index Y^len(positions)
    with the first listed position most significant.
    """
    words = np.asarray(words)
    positions = list(positions)
    n_out = wmat.shape[1] ** len(positions)
    if key_positions:
        keys, gid = np.unique(words[:, list(key_positions)], axis=0, return_inverse=True)
        gid = np.asarray(gid).ravel()
    else:
        keys = np.zeros((1, 0), dtype=words.dtype)
        gid = np.zeros(len(words), dtype=np.int64)
    dtype = object if is_exact(wmat) else np.float64
    table = np.zeros((len(keys), n_out), dtype=dtype)
    block = max(1, _CHUNK_ENTRIES // max(n_out, 1))
    for start in range(0, len(words), block):
        chunk = words[start : start + block]
        lik = np.ones((len(chunk), 1), dtype=dtype)
        for i in positions:
            rows = wmat[chunk[:, i]]
            lik = (lik[:, :, None] * rows[:, None, :]).reshape(len(chunk), -1)
        g = gid[start : start + block]
        for k in np.unique(g):
            table[k] = table[k] + lik[g == k].sum(axis=0)
    return keys, table


def _coset_matrix(words: np.ndarray, wmat: np.ndarray, q: int) -> np.ndarray:
    """V(y | x0) for the code whose codewords are ``words`` (distinct rows)."""
    _, table = likelihood_table(words, wmat, range(1, words.shape[1]))
    scale = Fraction(q, len(words)) if is_exact(wmat) else q / len(words)
    return table * scale


def _projected(words: np.ndarray, columns: Sequence[int]) -> np.ndarray:
    """Distinct punctured codewords; a uniform codeword projects to a uniform one."""
    return np.unique(words[:, list(columns)], axis=0)


def exact_terms(code: LinearCode, n_outputs: int) -> int:
    """Elementary products needed to expand every erasure pattern."""
    return code.size * (n_outputs + 1) ** (code.length - 1)


def require_budget(code: LinearCode, n_outputs: int, operation: str) -> None:
    budget = get_settings().exact_budget
    terms = exact_terms(code, n_outputs)
    if terms > budget:
        raise TooLargeForExact(
            f"{operation} needs {terms} terms, above the exact budget {budget}"
        )


def _base(code: LinearCode, channel: DiscreteChannel) -> DiscreteChannel:
    if channel.q != code.q:
        raise InputSizeMismatch(f"channel has {channel.q} inputs, code alphabet is {code.q}")
    check_position_zero(code)
    return standardize(channel).as_channel()


def coset_channel(
    code: LinearCode, channel: DiscreteChannel, t: Optional[Number] = None
) -> DiscreteChannel:
    """X_0 -> Y_{~0} with the codeword uniform on the coset of X_0.

    With ``t`` the outputs first pass an erasure channel.
    """
    base = _base(code, channel)
    if t is not None:
        base = erasure_compose(base, t)
    budget = get_settings().exact_budget
    terms = code.size * base.n_outputs ** (code.length - 1)
    if terms > budget:
        raise TooLargeForExact(f"coset channel needs {terms} terms, above {budget}")
    matrix = _coset_matrix(code.codewords, base.matrix, code.q)
    labels = tuple(str(j) for j in range(matrix.shape[1]))
    return DiscreteChannel(q=code.q, outputs=labels, matrix=matrix)


def representative_independence(code: LinearCode, channel: DiscreteChannel) -> bool:
    """The law of psi(Y_{~0}) given X = c depends on c only through c_0."""
    base = _base(code, channel)
    words = code.codewords
    require_budget(code, base.n_outputs, "representative check")
    v = _coset_matrix(words, base.matrix, code.q)
    colsum = v.sum(axis=0)
    keep = np.flatnonzero(colsum != 0)
    post = (v[:, keep] / colsum[keep]).T
    exact = base.exact
    atom_keys = [
        tuple(row) if exact else tuple(np.round(to_float(row), 9) + 0.0) for row in post
    ]
    laws: Dict[int, Dict[Tuple, Number]] = {}
    for c in words:
        _, lik = likelihood_table(c[None, :], base.matrix, range(1, len(c)), ())
        law: Dict[Tuple, Number] = {}
        for j, y in enumerate(keep):
            law[atom_keys[j]] = law.get(atom_keys[j], 0) + lik[0, y]
        if not exact:
            law = {k: round(float(p), 9) for k, p in law.items() if round(float(p), 9)}
        else:
            law = {k: p for k, p in law.items() if p}
        x0 = int(c[0])
        if x0 in laws:
            if laws[x0] != law:
                return False
        else:
            laws[x0] = law
    return True


# --- Pattern expansion ---


@dataclass(frozen=True, eq=False)
class PatternStats:
    """Coset-channel quantities with only the positions in ``kept`` observed."""

    kept: Tuple[int, ...]
    overlap: np.ndarray
    ser: Number
    mutual_information: float
    extrinsic: float


def pattern_stats(
    kept: Tuple[int, ...], words: np.ndarray, base: DiscreteChannel, h_w: float
) -> Tuple[PatternStats, np.ndarray]:
    q = base.q
    sub = _projected(words, (0,) + kept)
    v = _coset_matrix(sub, base.matrix, q)
    colsum = v.sum(axis=0)
    nz = np.flatnonzero(colsum != 0)
    v, colsum = v[:, nz], colsum[nz]
    Q = (v / colsum) @ v.T
    correct = sum(max(v[:, j]) for j in range(v.shape[1]))
    ser = 1 - correct / q
    vf = to_float(v)
    py = vf.sum(axis=0) / q
    mi = entropy(py, q) - sum(entropy(row, q) for row in vf) / q
    # I(X0; Y0 | Y_K) = H(Y0 | Y_K) - H(Y0 | X0)
    post = vf / vf.sum(axis=0)
    out0 = post.T @ base.as_float()
    h_cond = float(sum(p * entropy(row, q) for p, row in zip(py, out0)))
    return (
        PatternStats(kept=kept, overlap=Q, ser=ser, mutual_information=mi, extrinsic=h_cond - h_w),
        v,
    )


@dataclass(frozen=True, eq=False)
class CosetAnalysis:
    """Erasure-pattern expansion of the coset channel of ``code`` on ``channel``."""

    code: LinearCode
    channel: DiscreteChannel
    exact: bool
    patterns: Tuple[PatternStats, ...]
    overlap_poly: Tuple[Tuple[ErasurePolynomial, ...], ...]
    trace_poly: ErasurePolynomial
    delta_poly: ErasurePolynomial
    ser_poly: ErasurePolynomial
    mi_poly: ErasurePolynomial
    exit_poly: ErasurePolynomial
    channel_at_zero: DiscreteChannel
    capacity: float = field(default=0.0)

    @property
    def q(self) -> int:
        return self.code.q

    @property
    def rate(self) -> Fraction:
        return self.code.rate

    def _t(self, t: Number) -> Number:
        if not 0 <= t <= 1:
            raise TOutOfRange(f"t = {t} is outside [0, 1]")
        return exact_like(t, self.exact and is_exact_scalar(t))

    def overlap_at(self, t: Number) -> OverlapReport:
        t = self._t(t)
        exact = self.exact and is_exact_scalar(t)
        Q = np.array([[p(t) for p in row] for row in self.overlap_poly], dtype=object)
        if not exact:
            Q = to_float(Q)
        return overlap_from_matrix(Q, exact)

    def delta(self, t: Number) -> Number:
        return self.delta_poly(self._t(t))

    def trace(self, t: Number) -> Number:
        return self.trace_poly(self._t(t))

    def ser(self, t: Number) -> Number:
        return self.ser_poly(self._t(t))

    def delta_avg(self) -> Number:
        return self.delta_poly.integral()

    def mutual_information(self, t: Number) -> float:
        return float(self.mi_poly(float(self._t(t))))

    def delta_from_definition(self, t: Number) -> Number:
        """delta(t) straight from the posterior of the erased coset channel."""
        v_t = coset_channel(self.code, self.channel, self._t(t))
        return discrepancy_from_definition(v_t)

    def mutual_information_bound(self, t: Number) -> "InfoBoundReport":
        t = float(self._t(t))
        valid = self.capacity > float(self.rate) and t < 1 - float(self.rate) / self.capacity
        lower = self.capacity - float(self.rate) / (1 - t) if t < 1 else -math.inf
        value = self.mutual_information(t)
        return InfoBoundReport(
            t=t,
            mutual_information=value,
            lower_bound=lower,
            applicable=valid,
            holds=value >= lower - get_settings().margin_tolerance,
        )


@dataclass(frozen=True)
class InfoBoundReport:
    t: float
    mutual_information: float
    lower_bound: float
    applicable: bool
    holds: bool


def analyze_coset(code: LinearCode, channel: DiscreteChannel) -> CosetAnalysis:
    """Expand all 2^(N-1) erasure patterns exactly."""
    base = _base(code, channel)
    require_budget(code, base.n_outputs, "coset analysis")
    words = code.codewords
    q, n = code.q, code.length
    degree = n - 1
    exact = base.exact
    h_w = sum(entropy(row, q) for row in base.as_float()) / q
    zero = Fraction(0) if exact else 0.0
    q_sums: Dict[int, np.ndarray] = {}
    ser_sums: Dict[int, Number] = {}
    mi_sums: Dict[int, float] = {}
    exit_sums: Dict[int, float] = {}
    patterns: List[PatternStats] = []
    full: Optional[np.ndarray] = None
    others = tuple(range(1, n))
    for size in range(n):
        for kept in combinations(others, size):
            stats, v = pattern_stats(kept, words, base, h_w)
            a = degree - size
            q_sums[a] = q_sums.get(a, np.full((q, q), zero, dtype=object)) + stats.overlap
            ser_sums[a] = ser_sums.get(a, zero) + stats.ser
            mi_sums[a] = mi_sums.get(a, 0.0) + stats.mutual_information
            exit_sums[a] = exit_sums.get(a, 0.0) + stats.extrinsic
            patterns.append(stats)
            if size == degree:
                full = v
    overlap_poly = tuple(
        tuple(
            pattern_sum({a: Q[x, y] for a, Q in q_sums.items()}, degree) for y in range(q)
        )
        for x in range(q)
    )
    trace_poly = overlap_poly[0][0]
    for x in range(1, q):
        trace_poly = trace_poly + overlap_poly[x][x]
    square = overlap_poly[0][0] * overlap_poly[0][0]
    for x in range(q):
        for y in range(q):
            if x or y:
                square = square + overlap_poly[x][y] * overlap_poly[x][y]
    inv_q = Fraction(1, q) if exact else 1.0 / q
    delta_poly = (trace_poly.elevate(2 * degree) - square).scale(inv_q)
    labels = tuple(str(j) for j in range(full.shape[1]))
    analysis = CosetAnalysis(
        code=code,
        channel=base,
        exact=exact,
        patterns=tuple(patterns),
        overlap_poly=overlap_poly,
        trace_poly=trace_poly,
        delta_poly=delta_poly,
        ser_poly=pattern_sum(ser_sums, degree),
        mi_poly=pattern_sum(mi_sums, degree),
        exit_poly=pattern_sum(exit_sums, degree),
        channel_at_zero=DiscreteChannel(q=q, outputs=labels, matrix=full),
        capacity=capacity_uniform(base),
    )
    logger.debug(
        json.dumps({"event": "coset_analysis", "q": q, "N": n, "patterns": len(patterns)})
    )
    return analysis


def delta_poly(code: LinearCode, channel: DiscreteChannel) -> ErasurePolynomial:
    return analyze_coset(code, channel).delta_poly


def delta_avg(code: LinearCode, channel: DiscreteChannel) -> Number:
    return analyze_coset(code, channel).delta_avg()


def coset_overlap(
    code: LinearCode,
    channel: DiscreteChannel,
    t: Number,
    analysis: Optional[CosetAnalysis] = None,
) -> OverlapReport:
    return (analysis or analyze_coset(code, channel)).overlap_at(t)


# --- Weak lower bound on tr Q(t) ---


@dataclass(frozen=True)
class Hypotheses:
    transitive: bool
    matched: bool
    rate_below_capacity: bool

    @property
    def hold(self) -> bool:
        return self.transitive and self.matched and self.rate_below_capacity

    def flags(self) -> str:
        return ";".join(
            name for name, ok in (
                ("transitive", self.transitive),
                ("matched", self.matched),
                ("r_lt_c", self.rate_below_capacity),
            ) if ok
        )


def hypotheses(code: LinearCode, channel: DiscreteChannel, capacity: float) -> Hypotheses:
    """Transitive permutation automorphisms, a channel matched to the additive
    group of F_q, and R < C."""
    spec = code.spec
    matched = contains_subgroup(symmetry_group(channel), named_group(spec, NamedGroup.ADDITIVE))
    return Hypotheses(
        transitive=code_transitivity(code) is not Transitivity.INTRANSITIVE,
        matched=matched,
        rate_below_capacity=float(code.rate) < capacity,
    )


@dataclass(frozen=True)
class WeakBoundReport:
    t: Number
    trace: Number
    lower_bound: float
    in_range: bool
    hypotheses: Hypotheses

    @property
    def applicable(self) -> bool:
        return self.in_range and self.hypotheses.hold

    @property
    def margin(self) -> float:
        return float(self.trace) - self.lower_bound

    @property
    def holds(self) -> bool:
        return self.margin >= -get_settings().margin_tolerance


def weak_bound_check(
    code: LinearCode,
    channel: DiscreteChannel,
    t: Number,
    analysis: Optional[CosetAnalysis] = None,
    assumptions: Optional[Hypotheses] = None,
) -> WeakBoundReport:
    """tr Q(t) against q^(C - R / (1 - t)) for 0 <= t < 1 - R/C."""
    a = analysis or analyze_coset(code, channel)
    cap, r = a.capacity, float(a.rate)
    tf = float(t)
    in_range = cap > r and tf < 1 - r / cap
    lower = a.q ** (cap - r / (1 - tf)) if tf < 1 else 0.0
    return WeakBoundReport(
        t=t,
        trace=a.trace(t),
        lower_bound=lower,
        in_range=in_range,
        hypotheses=assumptions or hypotheses(code, a.channel, cap),
    )


# --- Symbol error rate ---


@dataclass(frozen=True)
class SerBoundReport:
    """SER of the coset channel against 4 delta_avg / (1 - R/C)."""

    rate: Fraction
    capacity: float
    delta_avg: Number
    threshold: float
    delta_below_threshold: bool
    transitivity: Transitivity
    prime_case_bound: float
    case: str
    ser_at_zero: Number
    bound: Optional[float]

    @property
    def applicable(self) -> bool:
        return self.case != "not_applicable"

    @property
    def holds(self) -> Optional[bool]:
        if self.bound is None:
            return None
        return le(self.ser_at_zero, self.bound, get_settings().margin_tolerance)


@dataclass(frozen=True)
class SerBoundCase:
    """Which branch of the SER bound's hypotheses applies."""

    threshold: float
    prime_case_bound: float
    delta_below_threshold: bool
    case: str
    bound: Optional[float]


def ser_bound_case(
    q: int, capacity: float, rate: float, d_avg: float, kind: Optional[Transitivity]
) -> SerBoundCase:
    """Requires R < C, delta_avg <= (1 - R/C)(q^((C - R)/2) - 1)/q, and either a
    doubly transitive symmetry group of V, or a transitive one with q prime
    and delta_avg < (1 - R/C) / (8 q^2).

    ``kind`` is None when the symmetry group of V is unknown; the case is then
    "unknown" whenever the other hypotheses leave it open.
    """
    gap = 1 - rate / capacity if capacity > 0 else -math.inf
    threshold = gap * (q ** ((capacity - rate) / 2) - 1) / q if capacity > 0 else -math.inf
    prime_bound = gap / (8 * q * q)
    below = capacity > rate and d_avg <= threshold
    case = "not_applicable"
    if below and kind is None:
        case = "unknown"
    elif below and kind is Transitivity.DOUBLY_TRANSITIVE:
        case = "doubly_transitive"
    elif below and kind is Transitivity.TRANSITIVE and is_prime(q) and d_avg < prime_bound:
        case = "transitive_prime"
    bound = 4 * d_avg / gap if case in ("doubly_transitive", "transitive_prime") else None
    return SerBoundCase(
        threshold=threshold,
        prime_case_bound=prime_bound,
        delta_below_threshold=below,
        case=case,
        bound=bound,
    )


def ser_hypotheses(
    code: LinearCode, channel: DiscreteChannel, analysis: Optional[CosetAnalysis] = None
) -> SerBoundReport:
    """Evaluate the SER bound's hypotheses on the coset channel."""
    a = analysis or analyze_coset(code, channel)
    d_avg = a.delta_avg()
    kind = transitivity(symmetry_group(a.channel_at_zero))
    found = ser_bound_case(a.q, a.capacity, float(a.rate), float(d_avg), kind)
    return SerBoundReport(
        rate=a.rate,
        capacity=a.capacity,
        delta_avg=d_avg,
        threshold=found.threshold,
        delta_below_threshold=found.delta_below_threshold,
        transitivity=kind,
        prime_case_bound=found.prime_case_bound,
        case=found.case,
        ser_at_zero=a.ser(0),
        bound=found.bound,
    )


@dataclass(frozen=True)
class CosetSerReport:
    t: Number
    ser_exact: Number
    bound: SerBoundReport


def coset_ser(
    code: LinearCode,
    channel: DiscreteChannel,
    t: Number,
    analysis: Optional[CosetAnalysis] = None,
) -> CosetSerReport:
    a = analysis or analyze_coset(code, channel)
    return CosetSerReport(t=t, ser_exact=a.ser(t), bound=ser_hypotheses(code, channel, a))


def nonincreasing(values: Sequence[Number], tol: float = 1e-12) -> bool:
    return all(float(b) <= float(a) + tol for a, b in zip(values, values[1:]))


def nondecreasing(values: Sequence[Number], tol: float = 1e-12) -> bool:
    return all(float(b) >= float(a) - tol for a, b in zip(values, values[1:]))


@dataclass(frozen=True)
class SerChainReport:
    per_symbol: Tuple[Number, ...]
    full_observation: Number
    extrinsic: Number
    exact: bool

    @property
    def max_equals_first(self) -> bool:
        return _same(max(self.per_symbol, key=float), self.full_observation, self.exact)

    @property
    def inequality_holds(self) -> bool:
        return le(self.full_observation, self.extrinsic, get_settings().margin_tolerance)


def _same(a: Number, b: Number, exact: bool) -> bool:
    if exact:
        return a == b
    return abs(float(a) - float(b)) <= get_settings().margin_tolerance


def ser_chain(
    code: LinearCode, channel: DiscreteChannel, analysis: Optional[CosetAnalysis] = None
) -> SerChainReport:
    """SER(X_i | Y) for every i, SER(X_0 | Y) and SER(X_0 | Y_{~0})."""
    a = analysis or analyze_coset(code, channel)
    base = a.channel
    words = code.codewords
    n = code.length
    budget = get_settings().exact_budget
    terms = n * code.size * base.n_outputs**n
    if terms > budget:
        raise TooLargeForExact(f"SER chain needs {terms} terms, above {budget}")
    per_symbol = []
    for i in range(n):
        _, table = likelihood_table(words, base.matrix, range(n), (i,))
        correct = table.max(axis=0).sum() if not a.exact else sum(
            max(table[:, j]) for j in range(table.shape[1])
        )
        per_symbol.append(1 - correct / len(words))
    return SerChainReport(
        per_symbol=tuple(per_symbol),
        full_observation=per_symbol[0],
        extrinsic=a.ser(0),
        exact=a.exact,
    )


# --- Symmetry of the coset channel ---


@dataclass(frozen=True, eq=False)
class CosetSymmetryReport:
    relabelings: PermGroup
    channel_group: PermGroup
    additive: PermGroup
    common: PermGroup
    predicted: PermGroup
    coset_group: PermGroup

    @property
    def contains_additive(self) -> bool:
        return contains_subgroup(self.coset_group, self.additive)

    @property
    def contains_prediction(self) -> bool:
        return contains_subgroup(self.coset_group, self.predicted)

    @property
    def transitivity(self) -> Transitivity:
        return transitivity(self.coset_group)


def coset_symmetry_prediction(
    code: LinearCode, channel: DiscreteChannel, analysis: Optional[CosetAnalysis] = None
) -> CosetSymmetryReport:
    """F' = F cap G(W) together with the additive group generate a subgroup
    of the coset channel's symmetry group on matched instances."""
    a = analysis or analyze_coset(code, channel)
    relabel = relabel_group(code)
    g = symmetry_group(a.channel)
    common = intersect(relabel, g)
    additive = named_group(code.spec, NamedGroup.ADDITIVE)
    return CosetSymmetryReport(
        relabelings=relabel,
        channel_group=g,
        additive=additive,
        common=common,
        predicted=join(common, additive),
        coset_group=symmetry_group(a.channel_at_zero),
    )


def format_poly_row(poly: ErasurePolynomial) -> List[object]:
    return [format_number(c) for c in poly.coefficients]
