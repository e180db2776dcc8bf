"""Generalized Reed-Muller codes RM_q(r, m) and general linear codes over F_q."""

import json
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import norm

from .config import get_settings
from .exceptions import (
    DegeneratePosition,
    DegreeOutOfRange,
    EmptyIndexSet,
    InvalidIndexSet,
    KTooLarge,
    SingularMatrix,
    TooLarge,
)
from .gf import FieldSpec, enumerate_vectors
from .linalg import in_row_space, is_invertible, matmul, rank, row_basis, row_space_equal, span
from .perm import Permutation, PermGroup, Transitivity, orbit, transitivity_of

# Largest evaluation length we materialize
MAX_LENGTH = 2**20
# Relabeling search tests every sigma in Sym(q) against every codeword
RELABEL_MAX_Q = 5
RELABEL_MAX_CODEWORDS = 2**16
# Partial position maps tried per automorphism search
AUT_SEARCH_NODES = 200_000
# Full rank verification of a generator is skipped above this many entries
RANK_CHECK_ENTRIES = 2**18

logger = logging.getLogger("grmlab")

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


# --- Linear codes ---


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Row space of ``generator`` (k x N, full row rank) over F_q."""

    spec: FieldSpec
    generator: np.ndarray

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def length(self) -> int:
        return self.generator.shape[1]

    @property
    def dimension(self) -> int:
        return self.generator.shape[0]

    @property
    def size(self) -> int:
        return self.q**self.dimension

    @property
    def rate(self) -> Fraction:
        return Fraction(self.dimension, self.length)

    def encode(self, message: Sequence[int]) -> np.ndarray:
        return matmul(self.spec, np.atleast_2d(message), self.generator)[0]

    @cached_property
    def codewords(self) -> np.ndarray:
        """All codewords; row n encodes the message tau_k^{-1}(n)."""
        limit = get_settings().codeword_limit
        if self.size > limit:
            raise TooLarge(f"{self.size} codewords exceed the enumeration limit {limit}")
        words = span(self.spec, self.generator)
        words.setflags(write=False)
        return words

    def contains(self, word: Sequence[int]) -> bool:
        return in_row_space(self.spec, self.generator, np.asarray(word))

    def same_code(self, other: "LinearCode") -> bool:
        return self.length == other.length and row_space_equal(
            self.spec, self.generator, other.generator
        )


def linear_code(spec: FieldSpec, generator: np.ndarray) -> LinearCode:
    """Code spanned by the rows of any generator (rows are re-reduced)."""
    g = np.atleast_2d(np.asarray(generator, dtype=np.int64))
    return LinearCode(spec=spec, generator=row_basis(spec, g))


# --- Monomials and rates ---


@dataclass(frozen=True, eq=False)
class MonomialSet:
    """Exponent vectors d in [q]^m with sum(d) <= r, in tau order of d."""

    q: int
    r: int
    m: int
    exponents: np.ndarray

    def __len__(self) -> int:
        return self.exponents.shape[0]


def monomial_set(q: int, r: int, m: int) -> MonomialSet:
    n = np.arange(q**m, dtype=np.int64)
    digits = np.stack([(n // q**i) % q for i in range(m)], axis=1)
    keep = digits.sum(axis=1) <= r
    return MonomialSet(q=q, r=r, m=m, exponents=digits[keep])


@lru_cache(maxsize=4096)
def degree_counts(q: int, m: int) -> Tuple[int, ...]:
    """counts[s] = #{d in [q]^m : sum(d) = s}, by repeated convolution."""
    counts = [1]
    for _ in range(m):
        nxt = [0] * (len(counts) + q - 1)
        for s, c in enumerate(counts):
            if c:
                for j in range(q):
                    nxt[s + j] += c
        counts = nxt
    return tuple(counts)


def monomial_count(q: int, r: int, m: int) -> int:
    """|M_{q,r,m}| without enumerating [q]^m."""
    if r < 0:
        return 0
    counts = degree_counts(q, m)
    return sum(counts[: min(r, len(counts) - 1) + 1])


def exact_rate(q: int, r: int, m: int) -> Fraction:
    return Fraction(monomial_count(q, r, m), q**m)


def degree_moments(q: int) -> Tuple[float, float, float]:
    """Mean, variance and third absolute central moment of Uniform([q])."""
    mu = (q - 1) / 2
    var = (q * q - 1) / 12
    rho = q * (q * q - 2) / 32 if q % 2 == 0 else (q * q - 1) ** 2 / (32 * q)
    return mu, var, rho


@dataclass(frozen=True)
class RateReport:
    q: int
    r: int
    m: int
    exact: Fraction
    gaussian: float
    be_bound: float

    @property
    def error(self) -> float:
        return abs(float(self.exact) - self.gaussian)


def rate(q: int, r: int, m: int) -> RateReport:
    """Exact rate by DP, its normal approximation and the Berry-Esseen envelope."""
    if m < 1:
        raise DegreeOutOfRange("m must be at least 1")
    mu, var, rho = degree_moments(q)
    sigma = math.sqrt(var)
    gaussian = float(norm.cdf((r - m * mu) / (sigma * math.sqrt(m))))
    be = min(rho / (2 * sigma**3 * math.sqrt(m)), 1 / math.sqrt(m))
    return RateReport(
        q=q, r=r, m=m, exact=exact_rate(q, r, m), gaussian=gaussian, be_bound=be
    )


@dataclass(frozen=True)
class RateDiffReport:
    q: int
    r: int
    m: int
    k: int
    difference: Fraction
    bound: float
    hypotheses_hold: bool

    @property
    def holds(self) -> bool:
        return float(self.difference) <= self.bound + 1e-12


def rate_diff_bound(q: int, r: int, m: int, k: int) -> RateDiffReport:
    """R_q(r, m-k) - R_q(r, m) <= 4k / sqrt(m-k) when 0 <= k < m - r."""
    if k >= m or k < 0:
        raise KTooLarge(f"k = {k} must satisfy 0 <= k < m = {m}")
    return RateDiffReport(
        q=q,
        r=r,
        m=m,
        k=k,
        difference=exact_rate(q, r, m - k) - exact_rate(q, r, m),
        bound=4 * k / math.sqrt(m - k),
        hypotheses_hold=0 <= k < m - r,
    )


# --- GRM codes ---


@dataclass(frozen=True, eq=False)
class GrmCode(LinearCode):
    r: int
    m: int
    monomials: MonomialSet

    @property
    def N(self) -> int:
        return self.length

    def rate_report(self) -> RateReport:
        return rate(self.q, self.r, self.m)

    def __repr__(self) -> str:
        return f"RM_{self.q}({self.r},{self.m})"


def evaluate_monomials(spec: FieldSpec, exponents: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Row j is ev(v^{d_j}) over all points."""
    pow_table = spec.pow_table
    rows = np.ones((exponents.shape[0], points.shape[0]), dtype=np.int64)
    for i in range(points.shape[1]):
        factor = pow_table[points[None, :, i], exponents[:, i, None]]
        rows = spec.mul_table[rows, factor]
    return rows


def grm_make(spec: FieldSpec, r: int, m: int, check_rank: Optional[bool] = None) -> GrmCode:
    q = spec.q
    if m < 1 or r < 0 or r > m * (q - 1):
        raise DegreeOutOfRange(f"need 0 <= r <= m(q-1) = {m * (q - 1)}, got r = {r}")
    if q**m > MAX_LENGTH:
        raise TooLarge(f"N = {q}^{m} exceeds {MAX_LENGTH}")
    monos = monomial_set(q, r, m)
    points = enumerate_vectors(spec, m).points
    generator = evaluate_monomials(spec, monos.exponents, points)
    if check_rank is None:
        check_rank = generator.size <= RANK_CHECK_ENTRIES
    if check_rank and rank(spec, generator) != len(monos):
        raise SingularMatrix("monomial evaluations are not independent")
    generator.setflags(write=False)
    return GrmCode(spec=spec, generator=generator, r=r, m=m, monomials=monos)


# --- Puncturing ---


def _check_index_set(code: LinearCode, index_set: Sequence[int]) -> List[int]:
    idx = [int(i) for i in index_set]
    if not idx:
        raise EmptyIndexSet("index set is empty")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise InvalidIndexSet("indices must be strictly increasing")
    if idx[0] < 0 or idx[-1] >= code.length:
        raise InvalidIndexSet(f"indices must lie in [0, {code.length})")
    return idx


def puncture(code: LinearCode, index_set: Sequence[int]) -> LinearCode:
    """Keep the positions in ``index_set``, in order."""
    idx = _check_index_set(code, index_set)
    return linear_code(code.spec, code.generator[:, idx])


def grm_puncture_first(code: GrmCode, k: int) -> LinearCode:
    """Keep the first q^(m-k) positions."""
    if k < 0 or k >= code.m:
        raise KTooLarge(f"k = {k} must satisfy 0 <= k < m = {code.m}")
    return puncture(code, range(code.q ** (code.m - k)))


def preimage_multiplicities(code: LinearCode, index_set: Sequence[int]) -> Counter:
    """How many codewords project onto each punctured word."""
    idx = _check_index_set(code, index_set)
    projected = code.codewords[:, idx]
    _, counts = np.unique(projected, axis=0, return_counts=True)
    return Counter(int(c) for c in counts)


@dataclass(frozen=True)
class PunctureCheck:
    q: int
    r: int
    m: int
    k: int
    row_space_equal: bool
    expected_multiplicity: int
    multiplicities: Dict[int, int]

    @property
    def uniform(self) -> bool:
        return list(self.multiplicities) == [self.expected_multiplicity]

    @property
    def passed(self) -> bool:
        return self.row_space_equal and self.uniform


def puncture_check(spec: FieldSpec, r: int, m: int, k: int) -> PunctureCheck:
    """Keeping the first q^(m-k) symbols of RM_q(r, m) gives RM_q(r, m-k),
    and every punctured word has |C| / |C_I| preimages."""
    code = grm_make(spec, r, m)
    punctured = grm_puncture_first(code, k)
    small = grm_make(spec, min(r, (m - k) * (spec.q - 1)), m - k)
    expected = code.size // punctured.size
    mult = preimage_multiplicities(code, range(spec.q ** (m - k)))
    return PunctureCheck(
        q=spec.q,
        r=r,
        m=m,
        k=k,
        row_space_equal=punctured.same_code(small),
        expected_multiplicity=expected,
        multiplicities=dict(mult),
    )


# --- Automorphisms ---


def permute_positions(generator: np.ndarray, pi: Permutation) -> np.ndarray:
    """Symbol at position i moves to position pi(i)."""
    out = np.empty_like(generator)
    out[:, list(pi.images)] = generator
    return out


def is_automorphism(code: LinearCode, pi: Permutation) -> bool:
    if pi.degree != code.length:
        return False
    return row_space_equal(code.spec, code.generator, permute_positions(code.generator, pi))


def affine_index_perm(code: GrmCode, A: np.ndarray, b: Sequence[int]) -> Permutation:
    """i -> tau(A tau^{-1}(i) + b)."""
    spec = code.spec
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if A.shape != (code.m, code.m) or b.shape != (code.m,):
        raise SingularMatrix(f"need an {code.m} x {code.m} matrix and a length-{code.m} shift")
    if not is_invertible(spec, A):
        raise SingularMatrix("A is singular over F_q")
    points = enumerate_vectors(spec, code.m).points
    moved = matmul(spec, points, A.T)
    moved = spec.add_table[moved, b[None, :]]
    weights = spec.q ** np.arange(code.m, dtype=np.int64)
    return Permutation(tuple(int(i) for i in moved @ weights))


def automorphism_generators(code: GrmCode) -> List[Permutation]:
    """Generators of the affine group acting on positions: unit translations,
    transvections I + a E_ij (a != 0) and a scaling of the first coordinate."""
    spec, m = code.spec, code.m
    eye = np.eye(m, dtype=np.int64)
    zero = np.zeros(m, dtype=np.int64)
    gens = []
    for j in range(m):
        gens.append(affine_index_perm(code, eye, eye[j]))
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            for a in range(1, spec.q):
                t = eye.copy()
                t[i, j] = a
                gens.append(affine_index_perm(code, t, zero))
    if spec.q > 2:
        scale = eye.copy()
        scale[0, 0] = spec.beta
        gens.append(affine_index_perm(code, scale, zero))
    return gens


def automorphism_transitivity(code: GrmCode) -> Transitivity:
    return transitivity_of(code.length, automorphism_generators(code))


# --- Alphabet relabelings ---


def relabel_group(code: LinearCode) -> PermGroup:
    """Homogeneous relabelings sigma with (sigma(c_0), ..., sigma(c_{N-1})) in C."""
    q = code.q
    if q > RELABEL_MAX_Q or code.size > RELABEL_MAX_CODEWORDS:
        raise TooLarge(
            f"relabel search needs q <= {RELABEL_MAX_Q} and at most "
            f"{RELABEL_MAX_CODEWORDS} codewords"
        )
    words = code.codewords
    members = {row.tobytes() for row in words}
    found = []
    for images in permutations(range(q)):
        table = np.array(images, dtype=np.uint8)
        mapped = table[words]
        if all(row.tobytes() in members for row in mapped):
            found.append(Permutation(images))
    return PermGroup.from_elements(q, found)


# --- Cosets and sampling ---


def check_position_zero(code: LinearCode) -> None:
    if not np.any(code.generator[:, 0]):
        raise DegeneratePosition("position 0 is identically zero across the code")


def coset(code: LinearCode, x0: int) -> np.ndarray:
    """Codewords with c_0 = x0."""
    check_position_zero(code)
    words = code.codewords
    return words[words[:, 0] == x0]


def sample_codeword(
    code: LinearCode, seed: Union[int, np.random.Generator, None] = None, size: Optional[int] = None
) -> np.ndarray:
    """Uniform codeword(s): a uniform message pushed through the generator."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n = 1 if size is None else size
    messages = rng.integers(0, code.q, size=(n, code.dimension))
    words = matmul(code.spec, messages, code.generator)
    return words[0] if size is None else words


# --- Export ---


def format_row(row: Sequence[int], q: int) -> str:
    if q <= len(_DIGITS):
        return "".join(_DIGITS[int(v)] for v in row)
    return ".".join(str(int(v)) for v in row)


def export_json(code: LinearCode) -> Dict[str, object]:
    out: Dict[str, object] = {"q": code.q, "N": code.length, "k": code.dimension}
    if isinstance(code, GrmCode):
        out.update({"r": code.r, "m": code.m})
    out["generator"] = [format_row(row, code.q) for row in code.generator]
    return out


def format_generator(code: LinearCode) -> str:
    if isinstance(code, GrmCode):
        header = repr(code)
    else:
        header = f"[{code.length},{code.dimension}]_{code.q}"
    return "\n".join([header] + [format_row(row, code.q) for row in code.generator])


# --- Rate sum over the position-deleting subset family ---


@dataclass(frozen=True)
class RateSumReport:
    q: int
    r: int
    m: int
    k: int
    rate_sum: Fraction
    envelope: float


def family_depth(q: int, m: int) -> int:
    """Smallest k with q^(2k) >= m, i.e. ceil(log_q(m) / 2)."""
    k = 0
    while q ** (2 * k) < m:
        k += 1
    return k


def rate_sum_bound(q: int, r: int, m: int) -> RateSumReport:
    """Sum over B of H(X_B)/|B| - R for B_0 = [q^(m-k)], B_i = [N] \\ {i}
    (i = 1 .. q^(m-k) - 1), next to the envelope (7 + 3 log_q m) / sqrt(m)."""
    k = family_depth(q, m)
    if k >= m:
        raise KTooLarge(f"subset family needs k < m (k = {k}, m = {m})")
    n = q**m
    big = exact_rate(q, r, m)
    dim = monomial_count(q, r, m)
    head = exact_rate(q, r, m - k) - big
    tail = (q ** (m - k) - 1) * (Fraction(min(dim, n - 1), n - 1) - big)
    return RateSumReport(
        q=q,
        r=r,
        m=m,
        k=k,
        rate_sum=head + tail,
        envelope=(7 + 3 * math.log(m, q)) / math.sqrt(m),
    )


def _projection_equal(code: LinearCode, src: Sequence[int], dst: Sequence[int]) -> bool:
    g = code.generator
    return row_space_equal(code.spec, g[:, list(src)], g[:, list(dst)])


def find_automorphism(code: LinearCode, fixed: Dict[int, int]) -> Optional[Permutation]:
    """A permutation automorphism sending i to fixed[i], or None.

    Backtracks over positions; a partial map survives only while the code
    projected on its sources equals the code projected on its images.
    Gives up (None) after AUT_SEARCH_NODES partial maps.
    """
    n = code.length
    order = list(fixed) + [i for i in range(n) if i not in fixed]
    start = [fixed[i] for i in fixed]
    if len(set(start)) != len(start) or not _projection_equal(code, order[: len(start)], start):
        return None
    visited = 0

    def extend(images: List[int]) -> Optional[List[int]]:
        nonlocal visited
        depth = len(images)
        if depth == n:
            return images
        used = set(images)
        for j in range(n):
            if j in used:
                continue
            visited += 1
            if visited > AUT_SEARCH_NODES:
                return None
            candidate = images + [j]
            if _projection_equal(code, order[: depth + 1], candidate):
                found = extend(candidate)
                if found is not None:
                    return found
        return None

    images = extend(start)
    if images is None:
        if visited > AUT_SEARCH_NODES:
            logger.warning(
                json.dumps(
                    {"event": "automorphism_search_budget", "length": n, "fixed": fixed}
                )
            )
        return None
    full = [0] * n
    for src, dst in zip(order, images):
        full[src] = dst
    pi = Permutation(tuple(full))
    return pi if is_automorphism(code, pi) else None


def code_transitivity(code: LinearCode) -> Transitivity:
    """Transitivity of the permutation automorphism group on positions.

    GRM codes use their affine generators. Other codes search for an
    automorphism 0 -> j for every j, then for one fixing 0 with 1 -> j.
    """
    if isinstance(code, GrmCode):
        return automorphism_transitivity(code)
    n = code.length
    if n <= 1:
        return Transitivity.DOUBLY_TRANSITIVE
    gens: List[Permutation] = []
    for j in range(1, n):
        if j in orbit(n, gens, 0):
            continue
        pi = find_automorphism(code, {0: j})
        if pi is None:
            return Transitivity.INTRANSITIVE
        gens.append(pi)
    if transitivity_of(n, gens) is Transitivity.DOUBLY_TRANSITIVE:
        return Transitivity.DOUBLY_TRANSITIVE
    # transitive, so doubly transitive iff the stabilizer of 0 is transitive on the rest
    fixing: List[Permutation] = []
    for j in range(2, n):
        if j in orbit(n, fixing, 1):
            continue
        pi = find_automorphism(code, {0: 0, 1: j})
        if pi is None:
            return Transitivity.TRANSITIVE
        fixing.append(pi)
    return Transitivity.DOUBLY_TRANSITIVE


def repetition_code(spec: FieldSpec, length: int) -> LinearCode:
    return LinearCode(spec=spec, generator=np.ones((1, length), dtype=np.int64))
