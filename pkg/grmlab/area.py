"""EXIT curves on punctured codes and the two forms of the area theorem."""

import math
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence

import numpy as np

from .channel import DiscreteChannel, standardize
from .config import get_settings
from .coset import likelihood_table, pattern_stats
from .erasure import ErasurePolynomial, pattern_sum
from .exceptions import (
    InputSizeMismatch,
    InvalidIndexSet,
    NotTransitive,
    TooLargeForExact,
    ZeroNotInS,
)
from .grm import GrmCode, LinearCode, code_transitivity, puncture
from .numeric import entropy
from .perm import Transitivity

AREA_TOLERANCE = 1e-10


def _index_set(code: LinearCode, subset: Optional[Sequence[int]]) -> List[int]:
    if subset is None:
        return list(range(code.length))
    s = sorted(set(int(i) for i in subset))
    if not s or s[0] != 0:
        raise ZeroNotInS("the index set must contain position 0")
    if s[-1] >= code.length:
        raise InvalidIndexSet(f"index {s[-1]} is outside [0, {code.length})")
    return s


def subset_transitive(code: LinearCode, subset: Sequence[int]) -> bool:
    """Whether the punctured code on ``subset`` has transitive automorphisms.

    For GRM codes the prefix sets [q^j] (punctured code is again GRM) and the
    sets [N] minus a point (a point stabilizer of the affine group) are known;
    anything else is decided on the punctured code itself.
    """
    s = list(subset)
    n = code.length
    if isinstance(code, GrmCode):
        prefixes = {code.q**j for j in range(code.m + 1)}
        if s == list(range(len(s))) and len(s) in prefixes:
            return True
        if len(s) == n - 1:
            return True
    target = code if len(s) == n else puncture(code, s)
    return code_transitivity(target) is not Transitivity.INTRANSITIVE


def _prepare(
    code: LinearCode,
    channel: DiscreteChannel,
    subset: Optional[Sequence[int]],
    assume_transitive: bool,
    operation: str,
):
    if channel.q != code.q:
        raise InputSizeMismatch(f"channel has {channel.q} inputs, code alphabet is {code.q}")
    s = _index_set(code, subset)
    if not assume_transitive and not subset_transitive(code, s):
        raise NotTransitive(f"punctured code on {s} has intransitive automorphisms")
    base = standardize(channel).as_channel()
    words = np.unique(code.codewords[:, s], axis=0)
    budget = get_settings().exact_budget
    terms = 2 ** (len(s) - 1) * len(words) * base.n_outputs ** len(s)
    if terms > budget:
        raise TooLargeForExact(f"{operation} needs {terms} terms, above {budget}")
    return s, base, words


def _noise_entropy(words: np.ndarray, base: DiscreteChannel) -> float:
    """H(Y_S | X_S) for a uniform codeword."""
    h_rows = np.array([entropy(row, base.q) for row in base.as_float()])
    return float(h_rows[words].sum(axis=1).mean())


def _mutual_information(words: np.ndarray, base: DiscreteChannel) -> float:
    """I(X_S; Y_S) for a uniform codeword of the punctured code."""
    _, table = likelihood_table(words, base.as_float(), range(words.shape[1]), ())
    return entropy(table[0] / len(words), base.q) - _noise_entropy(words, base)


def exit_curve(
    code: LinearCode,
    channel: DiscreteChannel,
    subset: Optional[Sequence[int]] = None,
    assume_transitive: bool = False,
) -> ErasurePolynomial:
    """t -> I(X_0; Y_0 | Y_{S-0}(t)) in the pattern basis of degree |S| - 1."""
    s, base, words = _prepare(code, channel, subset, assume_transitive, "EXIT curve")
    return _exit_poly(words, base)


def _exit_poly(words: np.ndarray, base: DiscreteChannel) -> ErasurePolynomial:
    q = base.q
    degree = words.shape[1] - 1
    h_w = sum(entropy(row, q) for row in base.as_float()) / q
    sums = {}
    for size in range(degree + 1):
        for kept in combinations(range(1, degree + 1), size):
            stats, _ = pattern_stats(kept, words, base, h_w)
            a = degree - size
            sums[a] = sums.get(a, 0.0) + stats.extrinsic
    return pattern_sum(sums, degree)


@dataclass(frozen=True, eq=False)
class AreaReport:
    subset: List[int]
    curve: ErasurePolynomial
    integral: float
    rhs: float

    @property
    def difference(self) -> float:
        return self.integral - self.rhs

    @property
    def holds(self) -> bool:
        return abs(self.difference) <= AREA_TOLERANCE


def area_check(
    code: LinearCode,
    channel: DiscreteChannel,
    subset: Optional[Sequence[int]] = None,
    assume_transitive: bool = False,
) -> AreaReport:
    """Integral of the EXIT curve against I(X_S; Y_S) / |S|."""
    s, base, words = _prepare(code, channel, subset, assume_transitive, "area check")
    curve = _exit_poly(words, base)
    return AreaReport(
        subset=s,
        curve=curve,
        integral=float(curve.integral()),
        rhs=_mutual_information(words, base) / len(s),
    )


def _equivocation(words: np.ndarray, base: DiscreteChannel, revealed: Sequence[int]) -> float:
    """H(X_0 | Y_S, X_U) for the revealed positions U."""
    q = base.q
    keys, table = likelihood_table(
        words, base.as_float(), range(words.shape[1]), (0,) + tuple(revealed)
    )
    joint = table / len(words)
    h_all = entropy(joint, q)
    if not revealed:
        return h_all - entropy(joint.sum(axis=0), q)
    _, rest = np.unique(keys[:, 1:], axis=0, return_inverse=True)
    rest = np.asarray(rest).ravel()
    marginal = np.zeros((int(rest.max()) + 1, joint.shape[1]))
    np.add.at(marginal, rest, joint)
    return h_all - entropy(marginal, q)


def entropy_curve(
    code: LinearCode,
    channel: DiscreteChannel,
    subset: Optional[Sequence[int]] = None,
    assume_transitive: bool = False,
) -> ErasurePolynomial:
    """t -> H(X_0 | Y_S, X_{S-0}(t)) where each other symbol is erased w.p. t."""
    s, base, words = _prepare(code, channel, subset, assume_transitive, "entropy curve")
    return _entropy_poly(words, base)


def _entropy_poly(words: np.ndarray, base: DiscreteChannel) -> ErasurePolynomial:
    degree = words.shape[1] - 1
    sums = {}
    for size in range(degree + 1):
        for revealed in combinations(range(1, degree + 1), size):
            a = degree - size
            sums[a] = sums.get(a, 0.0) + _equivocation(words, base, revealed)
    return pattern_sum(sums, degree)


def entropy_area_check(
    code: LinearCode,
    channel: DiscreteChannel,
    subset: Optional[Sequence[int]] = None,
    assume_transitive: bool = False,
) -> AreaReport:
    """Integral of the entropy curve against H(X_S | Y_S) / |S|."""
    s, base, words = _prepare(code, channel, subset, assume_transitive, "entropy area check")
    curve = _entropy_poly(words, base)
    h_code = math.log(len(words)) / math.log(base.q)
    return AreaReport(
        subset=s,
        curve=curve,
        integral=float(curve.integral()),
        rhs=(h_code - _mutual_information(words, base)) / len(s),
    )
