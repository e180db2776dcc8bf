"""Rate-cover bound on delta_avg, its Efron-Stein decomposition, and the
closed-form discrepancy bound for GRM codes."""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .area import subset_transitive
from .channel import DiscreteChannel, overlap
from .coset import CosetAnalysis, analyze_coset
from .erasure import ErasurePolynomial
from .exceptions import (
    IntersectionNotZero,
    InvalidIndexSet,
    MTooSmall,
    ZeroMinPIC,
)
from .grm import GrmCode, LinearCode, family_depth, puncture
from .linalg import rank
from .numeric import Number, le

ES_TOLERANCE = 1e-12

Family = Sequence[Sequence[int]]


def subset_family(q: int, m: int) -> List[List[int]]:
    """B_0 = [q^(m-k)] and B_i = [q^m] minus {i} for 1 <= i < q^(m-k),
    with k the smallest integer such that q^(2k) >= m."""
    k = family_depth(q, m)
    if k == 0 or k >= m:
        raise MTooSmall(f"no subset family for q = {q}, m = {m} (k = {k})")
    n = q**m
    head = q ** (m - k)
    return [list(range(head))] + [[j for j in range(n) if j != i] for i in range(1, head)]


def _normalize_family(code: LinearCode, family: Family) -> List[List[int]]:
    sets = []
    for subset in family:
        s = sorted(set(int(i) for i in subset))
        if not s or s[0] < 0 or s[-1] >= code.length:
            raise InvalidIndexSet(f"subset {list(subset)} is not inside [0, {code.length})")
        sets.append(s)
    if not sets:
        raise IntersectionNotZero("the subset family is empty")
    common = set(sets[0]).intersection(*sets[1:])
    if common != {0}:
        raise IntersectionNotZero(f"subsets intersect in {sorted(common)}, not {{0}}")
    return sets


def default_family(code: LinearCode) -> List[List[int]]:
    if isinstance(code, GrmCode):
        try:
            return subset_family(code.q, code.m)
        except MTooSmall:
            pass
    n = code.length
    if n == 1:
        return [[0]]
    return [[j for j in range(n) if j != i] for i in range(1, n)]


def _lambda_min(channel: DiscreteChannel) -> float:
    lam = overlap(channel).lambda_min
    if lam <= 0:
        raise ZeroMinPIC("the smallest principal inertia component is 0")
    return lam


@dataclass(frozen=True)
class CoverTerm:
    subset: Tuple[int, ...]
    entropy_rate: Fraction
    excess: Fraction
    transitive: bool


@dataclass(frozen=True)
class CoverReport:
    terms: Tuple[CoverTerm, ...]
    rate: Fraction
    rate_sum: Fraction
    lambda_min: float
    bound: float

    @property
    def all_transitive(self) -> bool:
        return all(t.transitive for t in self.terms)


def rate_cover_bound(
    code: LinearCode, channel: DiscreteChannel, family: Optional[Family] = None
) -> CoverReport:
    """(2 ln q / lambda_min^2) * sum over B of (H(X_B)/|B| - R).

    H(X_B) = log_q |C_B| is the dimension of the punctured code.
    """
    sets = _normalize_family(code, family if family is not None else default_family(code))
    lam = _lambda_min(channel)
    terms = []
    for s in sets:
        h = Fraction(rank(code.spec, code.generator[:, s]), len(s))
        terms.append(
            CoverTerm(
                subset=tuple(s),
                entropy_rate=h,
                excess=h - code.rate,
                transitive=subset_transitive(code, s),
            )
        )
    total = sum((t.excess for t in terms), Fraction(0))
    return CoverReport(
        terms=tuple(terms),
        rate=code.rate,
        rate_sum=total,
        lambda_min=lam,
        bound=2 * math.log(code.q) / lam**2 * float(total),
    )


# --- Efron-Stein ---


@dataclass(frozen=True, eq=False)
class EsTerm:
    """E||Psi(t) - E[Psi(t) | Y_{B-0}(t)]||^2 = (tr Q(t) - tr Q_B(t)) / q."""

    subset: Tuple[int, ...]
    poly: ErasurePolynomial
    integral: Number
    bound: float

    @property
    def holds(self) -> bool:
        return le(self.integral, self.bound, 1e-9)


@dataclass(frozen=True, eq=False)
class EfronSteinReport:
    delta_poly: ErasurePolynomial
    delta_avg: Number
    terms: Tuple[EsTerm, ...]
    cover: CoverReport

    @property
    def total(self) -> Number:
        return sum((t.integral for t in self.terms), 0 * self.delta_avg)

    @property
    def decomposition_holds(self) -> bool:
        return le(self.delta_avg, self.total, ES_TOLERANCE)

    @property
    def cover_holds(self) -> bool:
        return le(self.delta_avg, self.cover.bound, 1e-9)

    def pointwise(self, t: Number) -> bool:
        """delta(t) <= sum of the per-subset terms at t."""
        rhs = sum(term.poly(t) for term in self.terms)
        return le(self.delta_poly(t), rhs, ES_TOLERANCE)


def efron_stein_decompose(
    code: LinearCode,
    channel: DiscreteChannel,
    family: Optional[Family] = None,
    analysis: Optional[CosetAnalysis] = None,
) -> EfronSteinReport:
    a = analysis or analyze_coset(code, channel)
    cover = rate_cover_bound(code, channel, family)
    degree = code.length - 1
    scale = Fraction(1, code.q) if a.exact else 1.0 / code.q
    factor = 2 * math.log(code.q) / cover.lambda_min**2
    terms = []
    for term in cover.terms:
        sub = puncture(code, term.subset)
        sub_trace = analyze_coset(sub, a.channel).trace_poly.elevate(degree)
        poly = (a.trace_poly - sub_trace).scale(scale)
        terms.append(
            EsTerm(
                subset=term.subset,
                poly=poly,
                integral=poly.integral(),
                bound=factor * float(term.excess),
            )
        )
    return EfronSteinReport(
        delta_poly=a.delta_poly,
        delta_avg=a.delta_avg(),
        terms=tuple(terms),
        cover=cover,
    )


@dataclass(frozen=True)
class EfronSteinStandalone:
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def efron_stein_standalone(
    rng: np.random.Generator,
    sizes: Sequence[int] = (2, 3, 2),
    family: Family = ((0, 1), (1, 2), (0, 2)),
    n_groups: int = 2,
    dim: int = 3,
) -> EfronSteinStandalone:
    """E||Z - E[Z|G]||^2 against sum over A of E||Z - E[Z|G, Y_A]||^2 for a
    random Z = f(G, Y) with Y_i conditionally independent given G.

    Every coordinate must be missing from at least one A.
    """
    k = len(sizes)
    sets = [tuple(sorted(set(a))) for a in family]
    if not sets or set(range(k)).intersection(*[set(a) for a in sets]):
        raise IntersectionNotZero("every coordinate must be left out by some subset")
    pg = rng.dirichlet(np.ones(n_groups))
    joint = pg.reshape((n_groups,) + (1,) * k)
    for i, n in enumerate(sizes):
        cond = rng.dirichlet(np.ones(n), size=n_groups)
        shape = [n_groups] + [1] * k
        shape[i + 1] = n
        joint = joint * cond.reshape(shape)
    z = rng.normal(size=(n_groups,) + tuple(sizes) + (dim,))

    def spread(keep: Sequence[int]) -> float:
        # E||Z - E[Z | G, Y_keep]||^2
        axes = tuple(i + 1 for i in range(k) if i not in keep)
        mass = joint.sum(axis=axes, keepdims=True)
        mean = (joint[..., None] * z).sum(axis=axes, keepdims=True)
        mean = np.divide(mean, mass[..., None], out=np.zeros_like(mean), where=mass[..., None] > 0)
        return float((joint * ((z - mean) ** 2).sum(axis=-1)).sum())

    return EfronSteinStandalone(lhs=spread(()), rhs=sum(spread(a) for a in sets))


# --- Closed form for GRM codes ---


def dexit_grm_bound(q: int, m: int, lambda_min: float) -> float:
    """(2 ln q / lambda_min^2) (7 + 3 log_q m) / sqrt(m), for m >= q^2."""
    if m < q * q:
        raise MTooSmall(f"m = {m} is below q^2 = {q * q}")
    if lambda_min <= 0:
        raise ZeroMinPIC("lambda_min must be positive")
    return 2 * math.log(q) / lambda_min**2 * (7 + 3 * math.log(m, q)) / math.sqrt(m)
