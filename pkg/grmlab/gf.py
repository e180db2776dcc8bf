"""Finite field arithmetic for F_q, q = p^e, plus the reverse-lexicographic
enumeration of F_q^m.

Elements are stored as ranks in [q]: 0 is the zero element and beta^i has
rank i + 1, so position indices of a code and field elements live in the
same integer space. Internally the field is built on polynomial codes
(coefficients of the residue in base p) and the tables are then re-indexed
to ranks.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import EnumerationOverflow, NonPrime, UnsupportedSize, ZeroInverse

MAX_FIELD_SIZE = 64
MAX_EXTENSION = 4
# q^m must stay an exact int64 index
MAX_ENUMERATION = 2**62


class FieldOp(str, Enum):
    ADD = "add"
    MUL = "mul"
    INV = "inv"
    NEG = "neg"
    SUB = "sub"
    DIV = "div"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# --- Polynomials over F_p: coefficient lists, lowest degree first ---


def _poly_rem(a: List[int], mod: Sequence[int], p: int) -> List[int]:
    """Remainder of a modulo a monic polynomial."""
    a = list(a)
    deg = len(mod) - 1
    for i in range(len(a) - 1, deg - 1, -1):
        c = a[i] % p
        if c:
            for j in range(deg + 1):
                a[i - deg + j] = (a[i - deg + j] - c * mod[j]) % p
    out = [c % p for c in a[:deg]]
    return out + [0] * (deg - len(out))


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _monic(degree: int, p: int) -> Iterator[List[int]]:
    """Monic polynomials of a degree, in increasing base-p value of the
    lower coefficients (a_0 is the least significant digit)."""
    for value in range(p**degree):
        coeffs = [(value // p**i) % p for i in range(degree)]
        yield coeffs + [1]


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Exhaustive factor search; fine for degree <= 4."""
    deg = len(f) - 1
    if deg <= 0:
        return False
    for d in range(1, deg // 2 + 1):
        for g in _monic(d, p):
            if not any(_poly_rem(list(f), g, p)):
                return False
    return True


def _lowest_irreducible(p: int, e: int) -> Tuple[int, ...]:
    for f in _monic(e, p):
        if is_irreducible(f, p):
            return tuple(f)
    raise UnsupportedSize(f"no irreducible polynomial of degree {e} over F_{p}")


def _digits(code: int, p: int, e: int) -> List[int]:
    return [(code // p**i) % p for i in range(e)]


def _undigits(coeffs: Sequence[int], p: int) -> int:
    return sum(c * p**i for i, c in enumerate(coeffs))


# --- Field tables ---


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """Arithmetic of F_q in rank representation.

    ``log_table`` and ``antilog_table`` are indexed by polynomial code:
    ``antilog_table[i]`` is the code of beta^i and ``log_table[c]`` its
    inverse (-1 at the zero code). ``rank_of_code``/``code_of_rank`` move
    between the two spaces; every other table is indexed by rank.
    """

    p: int
    e: int
    q: int
    modulus: Tuple[int, ...]
    beta: int
    beta_code: int
    log_table: np.ndarray
    antilog_table: np.ndarray
    rank_of_code: np.ndarray
    code_of_rank: np.ndarray
    add_table: np.ndarray
    mul_table: np.ndarray
    neg_table: np.ndarray
    inv_table: np.ndarray

    def __repr__(self) -> str:
        return f"FieldSpec(q={self.q}, p={self.p}, e={self.e}, modulus={self.modulus})"

    def _check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise UnsupportedSize(f"element {a} outside [0, {self.q})")
        return a

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[self._check(a), self._check(b)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, int(self.neg_table[self._check(b)]))

    def neg(self, a: int) -> int:
        return int(self.neg_table[self._check(a)])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[self._check(a), self._check(b)])

    def inv(self, a: int) -> int:
        if self._check(a) == 0:
            raise ZeroInverse("zero has no multiplicative inverse")
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        a = self._check(a)
        if n < 0:
            return self.pow(self.inv(a), -n)
        if n == 0:
            return 1
        if a == 0:
            return 0
        # rank a is beta^(a-1)
        return (((a - 1) * n) % (self.q - 1)) + 1

    def elements(self) -> range:
        return range(self.q)

    @cached_property
    def pow_table(self) -> np.ndarray:
        """pow_table[a, n] = a^n for 0 <= n < q (0^0 = 1)."""
        table = np.array(
            [[self.pow(a, n) for n in range(self.q)] for a in range(self.q)],
            dtype=np.int64,
        )
        table.setflags(write=False)
        return table

    @cached_property
    def char_vector(self) -> np.ndarray:
        """Polynomial coefficients of every element, indexed by rank (q x e)."""
        rows = [_digits(int(c), self.p, self.e) for c in self.code_of_rank]
        return np.array(rows, dtype=np.int64)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def field_make(p: int, e: int = 1) -> FieldSpec:
    """Build F_{p^e}. Same (p, e) always yields the same modulus and beta."""
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if e < 1 or e > MAX_EXTENSION or p**e > MAX_FIELD_SIZE:
        raise UnsupportedSize(
            f"q = {p}^{e} unsupported (need 1 <= e <= {MAX_EXTENSION}, "
            f"q <= {MAX_FIELD_SIZE})"
        )
    q = p**e
    modulus = _lowest_irreducible(p, e) if e > 1 else (0, 1)

    # Arithmetic on polynomial codes
    add_c = np.zeros((q, q), dtype=np.int64)
    mul_c = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        da = _digits(a, p, e)
        for b in range(q):
            db = _digits(b, p, e)
            add_c[a, b] = _undigits([(x + y) % p for x, y in zip(da, db)], p)
            if e == 1:
                mul_c[a, b] = (a * b) % p
            else:
                mul_c[a, b] = _undigits(_poly_rem(_poly_mul(da, db, p), modulus, p), p)

    # Smallest primitive element by code
    beta_code = -1
    powers: List[int] = []
    for g in range(1, q):
        seen = [1]
        x = 1
        for _ in range(q - 2):
            x = int(mul_c[x, g])
            seen.append(x)
        if len(set(seen)) == q - 1:
            beta_code, powers = g, seen
            break
    if beta_code < 0:
        raise UnsupportedSize(f"no primitive element found for q={q}")

    antilog = np.array(powers, dtype=np.int64)
    log = np.full(q, -1, dtype=np.int64)
    log[antilog] = np.arange(q - 1)
    code_of_rank = np.concatenate([[0], antilog])
    rank_of_code = np.zeros(q, dtype=np.int64)
    rank_of_code[code_of_rank] = np.arange(q)

    add_r = rank_of_code[add_c[np.ix_(code_of_rank, code_of_rank)]]
    mul_r = rank_of_code[mul_c[np.ix_(code_of_rank, code_of_rank)]]
    neg_r = np.array([int(np.flatnonzero(add_r[a] == 0)[0]) for a in range(q)])
    inv_r = np.full(q, -1, dtype=np.int64)
    for a in range(1, q):
        inv_r[a] = int(np.flatnonzero(mul_r[a] == 1)[0])

    return FieldSpec(
        p=p,
        e=e,
        q=q,
        modulus=tuple(int(c) for c in modulus),
        beta=int(rank_of_code[beta_code]),
        beta_code=beta_code,
        log_table=_frozen(log),
        antilog_table=_frozen(antilog),
        rank_of_code=_frozen(rank_of_code),
        code_of_rank=_frozen(code_of_rank),
        add_table=_frozen(add_r),
        mul_table=_frozen(mul_r),
        neg_table=_frozen(neg_r),
        inv_table=_frozen(inv_r),
    )


def field_of_size(q: int) -> FieldSpec:
    """Resolve q = p^e and build the field."""
    for p in range(2, q + 1):
        if q % p == 0:
            e, rest = 0, q
            while rest % p == 0:
                rest //= p
                e += 1
            if rest != 1:
                raise NonPrime(f"{q} is not a prime power")
            return field_make(p, e)
    raise NonPrime(f"{q} is not a prime power")


def field_arith(spec: FieldSpec, op: FieldOp | str, a: int, b: Optional[int] = None) -> int:
    op = FieldOp(op)
    if op in (FieldOp.INV, FieldOp.NEG):
        return spec.inv(a) if op is FieldOp.INV else spec.neg(a)
    if b is None:
        raise UnsupportedSize(f"operation {op.value} needs two operands")
    return {
        FieldOp.ADD: spec.add,
        FieldOp.SUB: spec.sub,
        FieldOp.MUL: spec.mul,
        FieldOp.DIV: spec.div,
    }[op](a, b)


def field_axioms_hold(spec: FieldSpec) -> bool:
    """Exhaustive axiom check (intended for q <= 16)."""
    q = spec.q
    add, mul = spec.add_table, spec.mul_table
    idx = np.arange(q)
    if not (np.array_equal(add, add.T) and np.array_equal(mul, mul.T)):
        return False
    if not (np.array_equal(add[0], idx) and np.array_equal(mul[1], idx)):
        return False
    for a in range(q):
        for b in range(q):
            if not np.array_equal(add[add[a, b]], add[a][add[b]]):
                return False
            if not np.array_equal(mul[mul[a, b]], mul[a][mul[b]]):
                return False
            # a (b + c) = ab + ac for all c
            if not np.array_equal(mul[a][add[b]], add[mul[a, b]][mul[a]]):
                return False
    if any(mul[a, spec.inv_table[a]] != 1 for a in range(1, q)):
        return False
    return all(add[a, spec.neg_table[a]] == 0 for a in range(q))


# --- Vector enumeration ---


@dataclass(frozen=True, eq=False)
class VectorEnumeration:
    """tau_m: F_q^m <-> [q^m], tau_m(v) = sum_i tau_1(v_i) q^i.

    Vectors hold ranks, so tau_1 is the identity on them.
    """

    spec: FieldSpec
    m: int

    @property
    def size(self) -> int:
        return self.spec.q**self.m

    def vec_to_index(self, v: Sequence[int]) -> int:
        if len(v) != self.m:
            raise UnsupportedSize(f"expected a length-{self.m} vector")
        q = self.spec.q
        return sum(self.spec._check(x) * q**i for i, x in enumerate(v))

    def index_to_vec(self, n: int) -> Tuple[int, ...]:
        if not 0 <= n < self.size:
            raise UnsupportedSize(f"index {n} outside [0, {self.size})")
        q = self.spec.q
        return tuple((n // q**i) % q for i in range(self.m))

    @cached_property
    def points(self) -> np.ndarray:
        """All vectors, row n = index_to_vec(n)."""
        q = self.spec.q
        n = np.arange(self.size, dtype=np.int64)
        cols = [(n // q**i) % q for i in range(self.m)]
        pts = np.stack(cols, axis=1) if cols else np.zeros((1, 0), dtype=np.int64)
        pts.setflags(write=False)
        return pts

    def __iter__(self) -> Iterator[Tuple[int, ...]]:
        for digits in product(range(self.spec.q), repeat=self.m):
            yield tuple(reversed(digits))


def enumerate_vectors(spec: FieldSpec, m: int) -> VectorEnumeration:
    if m < 1:
        raise UnsupportedSize("m must be at least 1")
    if spec.q**m > MAX_ENUMERATION:
        raise EnumerationOverflow(f"q^m = {spec.q}^{m} does not fit an index")
    return VectorEnumeration(spec=spec, m=m)
