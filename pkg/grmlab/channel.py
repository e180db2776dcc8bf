"""Finite-input channels: canonical form, overlap matrix, information
measures, erasure composition, symmetrization and symmetry groups."""

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import permutations
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import get_settings
from .exceptions import (
    DegreeMismatch,
    DegreeTooLarge,
    InputSizeMismatch,
    InvalidChannel,
    InvalidPrior,
    NotMarkov,
    TOutOfRange,
)
from .gf import is_prime
from .numeric import (
    Number,
    as_array,
    entropy,
    exact_like,
    format_matrix,
    format_number,
    is_exact,
    is_exact_scalar,
    le,
    mutual_information,
    to_float,
)
from .perm import (
    MAX_MATERIALIZED_DEGREE,
    Permutation,
    PermGroup,
    Transitivity,
    transitivity,
)

logger = logging.getLogger("grmlab")

ERASURE = "⊥"
ROW_SUM_TOLERANCE = 1e-9
# Eigenvalues in (-EIGEN_CLAMP, 0) are reported as 0
EIGEN_CLAMP = 1e-10


@dataclass(frozen=True, eq=False)
class DiscreteChannel:
    """Row-stochastic q x |Y| kernel. Entries are Fractions (object dtype)
    or float64. All-zero output columns are dropped on construction."""

    q: int
    outputs: Tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != self.q:
            raise InvalidChannel(f"matrix must have {self.q} rows")
        if m.shape[1] != len(self.outputs):
            raise InvalidChannel("one output label per column is required")
        if len(set(self.outputs)) != len(self.outputs):
            raise InvalidChannel("output labels must be distinct")
        if np.any(m < 0):
            raise InvalidChannel("entries must be nonnegative")
        sums = m.sum(axis=1)
        if is_exact(m):
            if any(s != 1 for s in sums):
                raise InvalidChannel("rows must sum to 1")
        elif not np.allclose(sums, 1.0, atol=ROW_SUM_TOLERANCE, rtol=0):
            raise InvalidChannel("rows must sum to 1")
        keep = np.flatnonzero(np.any(m != 0, axis=0))
        if len(keep) != m.shape[1]:
            object.__setattr__(self, "matrix", m[:, keep])
            object.__setattr__(self, "outputs", tuple(self.outputs[j] for j in keep))
        self.matrix.setflags(write=False)

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[Any]], outputs: Optional[Sequence[str]] = None
    ) -> "DiscreteChannel":
        matrix = as_array(rows)
        if matrix.ndim != 2 or matrix.shape[0] == 0:
            raise InvalidChannel("channel needs at least one input row")
        labels = tuple(str(o) for o in outputs) if outputs else tuple(
            str(j) for j in range(matrix.shape[1])
        )
        return cls(q=matrix.shape[0], outputs=labels, matrix=matrix)

    @property
    def exact(self) -> bool:
        return is_exact(self.matrix)

    @property
    def n_outputs(self) -> int:
        return self.matrix.shape[1]

    def as_float(self) -> np.ndarray:
        return to_float(self.matrix)

    def uniform_prior(self) -> np.ndarray:
        if self.exact:
            return np.array([Fraction(1, self.q)] * self.q, dtype=object)
        return np.full(self.q, 1.0 / self.q)


# --- Constructors ---


def _labels(n: int) -> Tuple[str, ...]:
    return tuple(str(j) for j in range(n))


def qsc(q: int, p: Number) -> DiscreteChannel:
    """q-ary symmetric channel: correct w.p. 1 - p, else uniform over the rest."""
    exact = is_exact_scalar(p)
    p = exact_like(p, exact)
    off = p / (q - 1)
    rows = [[1 - p if y == x else off for y in range(q)] for x in range(q)]
    return DiscreteChannel(q=q, outputs=_labels(q), matrix=_rows_array(rows, exact))


def qec(q: int, eps: Number) -> DiscreteChannel:
    exact = is_exact_scalar(eps)
    eps = exact_like(eps, exact)
    rows = [[1 - eps if y == x else 0 for y in range(q)] + [eps] for x in range(q)]
    return DiscreteChannel(
        q=q, outputs=_labels(q) + (ERASURE,), matrix=_rows_array(rows, exact)
    )


def bsc(p: Number) -> DiscreteChannel:
    return qsc(2, p)


def bec(eps: Number) -> DiscreteChannel:
    return qec(2, eps)


def z_channel(p: Number) -> DiscreteChannel:
    """Input 0 is received perfectly; input 1 flips to 0 w.p. p."""
    exact = is_exact_scalar(p)
    p = exact_like(p, exact)
    rows = [[1, 0], [p, 1 - p]]
    return DiscreteChannel(q=2, outputs=_labels(2), matrix=_rows_array(rows, exact))


def additive_noise(q: int, noise: Sequence[Number]) -> DiscreteChannel:
    """Y = X + Z mod q with Z ~ noise (integer addition)."""
    if len(noise) != q:
        raise InvalidChannel(f"noise pmf must have {q} entries")
    noise_arr = as_array([noise])[0]
    rows = [[noise_arr[(y - x) % q] for y in range(q)] for x in range(q)]
    return DiscreteChannel(
        q=q, outputs=_labels(q), matrix=_rows_array(rows, is_exact(noise_arr))
    )


def identity_channel(q: int) -> DiscreteChannel:
    rows = [[Fraction(int(x == y)) for y in range(q)] for x in range(q)]
    return DiscreteChannel(q=q, outputs=_labels(q), matrix=_rows_array(rows, True))


def uninformative(q: int) -> DiscreteChannel:
    return DiscreteChannel(
        q=q, outputs=("0",), matrix=_rows_array([[Fraction(1)] for _ in range(q)], True)
    )


def random_channel(
    q: int, n_outputs: int, rng: np.random.Generator, alpha: float = 1.0
) -> DiscreteChannel:
    """Dirichlet(alpha, ..., alpha) rows."""
    rows = rng.dirichlet(np.full(n_outputs, alpha), size=q)
    return DiscreteChannel(q=q, outputs=_labels(n_outputs), matrix=rows.astype(np.float64))


def random_rational_channel(
    q: int, n_outputs: int, rng: np.random.Generator, denominator: int = 12
) -> DiscreteChannel:
    """Rows are multinomial counts over ``denominator``; exact entries."""
    counts = rng.multinomial(denominator, np.full(n_outputs, 1.0 / n_outputs), size=q)
    rows = [[Fraction(int(c), denominator) for c in row] for row in counts]
    return DiscreteChannel(q=q, outputs=_labels(n_outputs), matrix=_rows_array(rows, True))


def _rows_array(rows: Sequence[Sequence[Any]], exact: bool) -> np.ndarray:
    if exact:
        return np.array([[Fraction(v) for v in row] for row in rows], dtype=object)
    return np.array([[float(v) for v in row] for row in rows], dtype=np.float64)


# --- JSON I/O ---


def channel_to_dict(channel: DiscreteChannel) -> Dict[str, Any]:
    return {
        "q": channel.q,
        "outputs": list(channel.outputs),
        "matrix": format_matrix(channel.matrix),
    }


def channel_from_dict(data: Dict[str, Any]) -> DiscreteChannel:
    try:
        rows = data["matrix"]
        q = int(data.get("q", len(rows)))
        outputs = data.get("outputs")
        channel = DiscreteChannel.from_rows(rows, outputs)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidChannel(f"malformed channel description: {exc}") from exc
    if channel.q != q:
        raise InvalidChannel(f"declared q={q} but matrix has {channel.q} rows")
    return channel


def load_channel(path: Union[str, Path]) -> DiscreteChannel:
    with open(path, "r", encoding="utf-8") as f:
        return channel_from_dict(json.load(f))


def save_channel(channel: DiscreteChannel, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(channel_to_dict(channel), f, indent=2)
        f.write("\n")


# --- Standard channel ---


@dataclass(frozen=True, eq=False)
class StandardChannel:
    """Distinct posterior atoms (rows) with their reference-measure masses.

    ``input_probs[x, j]`` = P(atom j | X = x) = masses[j] * atoms[j, x].
    Atoms are sorted lexicographically.
    """

    q: int
    atoms: np.ndarray
    masses: np.ndarray
    exact: bool

    @property
    def n_atoms(self) -> int:
        return self.atoms.shape[0]

    @property
    def input_probs(self) -> np.ndarray:
        return (self.atoms * self.masses[:, None]).T

    def as_channel(self) -> DiscreteChannel:
        return DiscreteChannel(
            q=self.q, outputs=_labels(self.n_atoms), matrix=np.array(self.input_probs)
        )


def atom_decimals(tolerance: Optional[float] = None) -> int:
    """Float atoms are grouped and matched after rounding to this many decimals."""
    tol = tolerance if tolerance is not None else get_settings().atom_tolerance
    return max(int(round(-math.log10(tol))), 0)


def _key(values: np.ndarray, exact: bool, decimals: int) -> Tuple:
    if exact:
        return tuple(values)
    return tuple(np.round(values.astype(np.float64), decimals) + 0.0)


def standardize(channel: DiscreteChannel, tolerance: Optional[float] = None) -> StandardChannel:
    m = channel.matrix
    if channel.exact:
        groups: Dict[Tuple, np.ndarray] = {}
        colsum = m.sum(axis=0)
        for j in range(m.shape[1]):
            post = tuple(m[:, j] / colsum[j])
            if post in groups:
                groups[post] = groups[post] + m[:, j]
            else:
                groups[post] = m[:, j].copy()
        keys = sorted(groups)
        merged = np.array([groups[k] for k in keys], dtype=object)
        masses = merged.sum(axis=1)
        atoms = merged / masses[:, None]
        return StandardChannel(q=channel.q, atoms=atoms, masses=masses, exact=True)

    decimals = atom_decimals(tolerance)
    colsum = m.sum(axis=0)
    post = (m / colsum).T
    _, inverse = np.unique(np.round(post, decimals), axis=0, return_inverse=True)
    inverse = np.asarray(inverse).ravel()
    merged = np.zeros((int(inverse.max()) + 1, channel.q))
    np.add.at(merged, inverse, m.T)
    masses = merged.sum(axis=1)
    atoms = merged / masses[:, None]
    return StandardChannel(q=channel.q, atoms=atoms, masses=masses, exact=False)


def blackwell_equal(
    first: DiscreteChannel, second: DiscreteChannel, tolerance: Optional[float] = None
) -> bool:
    if first.q != second.q:
        raise InputSizeMismatch(f"q differs: {first.q} vs {second.q}")
    a, b = standardize(first, tolerance), standardize(second, tolerance)
    if a.n_atoms != b.n_atoms:
        return False
    if a.exact and b.exact:
        return bool(np.all(a.atoms == b.atoms) and np.all(a.masses == b.masses))
    tol = tolerance if tolerance is not None else get_settings().atom_tolerance
    fa, fb = to_float(a.atoms), to_float(b.atoms)
    decimals = atom_decimals(tol)
    oa = np.lexsort(np.round(fa, decimals).T[::-1])
    ob = np.lexsort(np.round(fb, decimals).T[::-1])
    return bool(
        np.allclose(fa[oa], fb[ob], atol=tol, rtol=0)
        and np.allclose(to_float(a.masses)[oa], to_float(b.masses)[ob], atol=tol, rtol=0)
    )


# --- Overlap matrix ---


@dataclass(frozen=True, eq=False)
class OverlapReport:
    Q: np.ndarray
    pics: np.ndarray
    trace: Number
    delta: Number
    chi2: Number
    exact: bool

    @property
    def lambda_min(self) -> float:
        return float(self.pics[-1])

    @property
    def delta_from_pics(self) -> float:
        lam = self.pics[1:]
        return float(np.sum(lam * (1 - lam)) / len(self.pics))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "Q": format_matrix(self.Q),
            "pics": [float(v) for v in self.pics],
            "trace": format_number(self.trace),
            "delta": format_number(self.delta),
            "chi2": format_number(self.chi2),
            "exact": self.exact,
        }


def overlap_matrix(channel: DiscreteChannel) -> np.ndarray:
    """Q = W diag(1^T W)^{-1} W^T."""
    m = channel.matrix
    return (m / m.sum(axis=0)) @ m.T


def pics_of(Q: np.ndarray) -> np.ndarray:
    lam = np.sort(np.linalg.eigvalsh(to_float(Q)))[::-1]
    lam[(lam < 0) & (lam > -EIGEN_CLAMP)] = 0.0
    return lam


def overlap_from_matrix(Q: np.ndarray, exact: bool) -> OverlapReport:
    q = Q.shape[0]
    trace = Q.trace() if not exact else sum(Q[i, i] for i in range(q))
    trace_sq = (Q * Q).sum()
    if not exact:
        trace, trace_sq = float(trace), float(trace_sq)
    return OverlapReport(
        Q=Q,
        pics=pics_of(Q),
        trace=trace,
        delta=(trace - trace_sq) / q,
        chi2=trace - 1,
        exact=exact,
    )


def overlap(channel: DiscreteChannel) -> OverlapReport:
    return overlap_from_matrix(overlap_matrix(channel), channel.exact)


def sampled_channel(channel: DiscreteChannel) -> DiscreteChannel:
    """X -> X' where X' is resampled from the posterior of Y; its kernel is Q."""
    return DiscreteChannel(
        q=channel.q, outputs=_labels(channel.q), matrix=overlap_matrix(channel)
    )


def discrepancy_from_definition(channel: DiscreteChannel) -> Number:
    """E||phi(Y) - E[phi(Y)|X]||^2 under a uniform input, straight from outputs."""
    m = channel.matrix
    q = channel.q
    post = m / m.sum(axis=0)  # column y is phi(y)
    means = m @ post.T  # row x is E[phi(Y) | X = x]
    total = 0 * m[0, 0]
    for x in range(q):
        diff = post - means[x][:, None]
        total = total + (m[x] * (diff * diff).sum(axis=0)).sum()
    return total / q


def maximal_correlation(channel: DiscreteChannel) -> float:
    """sqrt of the largest nontrivial eigenvalue of Q."""
    pics = overlap(channel).pics
    return math.sqrt(max(float(pics[1]), 0.0)) if len(pics) > 1 else 0.0


# --- Information ---


@dataclass(frozen=True)
class InfoReport:
    mutual_information: float
    entropy_input: float
    entropy_output: float
    equivocation: float
    chi2: float
    # I(X;Y) <= log_q(1 + chi^2); under a uniform prior this is log_q tr Q
    log_bound: float


def _check_prior(prior: Optional[Sequence[Number]], channel: DiscreteChannel) -> np.ndarray:
    if prior is None:
        return channel.uniform_prior()
    arr = np.array(list(prior), dtype=object)
    if arr.shape != (channel.q,):
        raise InvalidPrior(f"prior must have {channel.q} entries")
    if any(v < 0 for v in arr):
        raise InvalidPrior("prior entries must be nonnegative")
    total = arr.sum()
    if all(is_exact_scalar(v) for v in arr):
        if total != 1:
            raise InvalidPrior("prior must sum to 1")
        return np.array([Fraction(v) for v in arr], dtype=object)
    if abs(float(total) - 1.0) > ROW_SUM_TOLERANCE:
        raise InvalidPrior("prior must sum to 1")
    return arr.astype(np.float64)


def info(channel: DiscreteChannel, prior: Optional[Sequence[Number]] = None) -> InfoReport:
    """Information measures in qits (base-q logarithms)."""
    p = to_float(_check_prior(prior, channel))
    w = channel.as_float()
    q = channel.q
    joint = p[:, None] * w
    py = joint.sum(axis=0)
    hx = entropy(p, q)
    hy = entropy(py, q)
    mi = mutual_information(p, w, q)
    support = p > 0
    ratio = np.zeros_like(joint)
    denom = np.outer(p, py)
    mask = denom > 0
    ratio[mask] = joint[mask] ** 2 / denom[mask]
    chi2 = float(ratio[support].sum() - 1.0)
    return InfoReport(
        mutual_information=mi,
        entropy_input=hx,
        entropy_output=hy,
        equivocation=hx - mi,
        chi2=chi2,
        log_bound=math.log(max(1.0 + chi2, 1e-300)) / math.log(q),
    )


def capacity_uniform(channel: DiscreteChannel) -> float:
    """Uniform-input mutual information (capacity for symmetric channels)."""
    return info(channel).mutual_information


# --- Erasure, symmetrization, relabeling ---


def erasure_compose(channel: DiscreteChannel, t: Number) -> DiscreteChannel:
    if not 0 <= t <= 1:
        raise TOutOfRange(f"t = {t} is outside [0, 1]")
    exact = channel.exact and is_exact_scalar(t)
    t = exact_like(t, exact)
    m = channel.matrix if exact else channel.as_float()
    label = ERASURE
    while label in channel.outputs:
        label += "'"
    erased = np.array([[t] for _ in range(channel.q)], dtype=object if exact else np.float64)
    return DiscreteChannel(
        q=channel.q,
        outputs=channel.outputs + (label,),
        matrix=np.hstack([m * (1 - t), erased]),
    )


def symmetrize(channel: DiscreteChannel, group: PermGroup) -> DiscreteChannel:
    """Send sigma(x) for a uniform sigma in H and reveal sigma:
    W'((y, sigma) | x) = W(y | sigma x) / |H|."""
    if group.degree != channel.q:
        raise DegreeMismatch(f"group degree {group.degree} != q = {channel.q}")
    m = channel.matrix
    blocks, labels = [], []
    for sigma in group.elements:
        blocks.append(m[list(sigma.images), :] / len(group))
        tag = ".".join(str(i) for i in sigma.images)
        labels.extend(f"{y}@{tag}" for y in channel.outputs)
    return DiscreteChannel(q=channel.q, outputs=tuple(labels), matrix=np.hstack(blocks))


def relabel_inputs(channel: DiscreteChannel, pi: Permutation) -> DiscreteChannel:
    """Input x of the old channel becomes input pi(x)."""
    if pi.degree != channel.q:
        raise DegreeMismatch(f"relabeling degree {pi.degree} != q = {channel.q}")
    m = np.empty_like(channel.matrix)
    m[list(pi.images)] = channel.matrix
    return DiscreteChannel(q=channel.q, outputs=channel.outputs, matrix=m)


# --- Symmetry group ---


def move_atoms(atoms: np.ndarray, sigma: Sequence[int]) -> np.ndarray:
    """Coordinate i of each posterior moves to coordinate sigma(i)."""
    moved = np.empty_like(atoms)
    moved[:, list(sigma)] = atoms
    return moved


def _is_symmetry(
    std: StandardChannel,
    index: Dict[Tuple, Any],
    sigma: Sequence[int],
    tol: float,
) -> bool:
    moved = move_atoms(std.atoms, sigma)
    decimals = atom_decimals(tol)
    for row, mass in zip(moved, std.masses):
        other = index.get(_key(row, std.exact, decimals))
        if other is None:
            return False
        if std.exact:
            if other != mass:
                return False
        elif abs(float(other) - float(mass)) > tol:
            return False
    return True


def symmetry_group(channel: DiscreteChannel, tolerance: Optional[float] = None) -> PermGroup:
    """All sigma with sigma W^s_x = W^s_{sigma x} for every input x.

    On the standard channel this means moving every atom's coordinates by
    sigma yields an atom of the same reference mass.
    """
    q = channel.q
    if q > MAX_MATERIALIZED_DEGREE:
        raise DegreeTooLarge(f"symmetry search over Sym({q}) is limited to q <= 8")
    std = standardize(channel, tolerance)
    tol = tolerance if tolerance is not None else get_settings().atom_tolerance
    decimals = atom_decimals(tol)
    index = {_key(a, std.exact, decimals): mass for a, mass in zip(std.atoms, std.masses)}
    # Coordinates that can map to each other share a (value, mass) profile
    profile = []
    for i in range(q):
        atoms_i = _key(std.atoms[:, i], std.exact, decimals)
        pairs = sorted(zip(atoms_i, _key(std.masses, std.exact, decimals)))
        profile.append(tuple(pairs))
    found = []
    for images in permutations(range(q)):
        if any(profile[i] != profile[images[i]] for i in range(q)):
            continue
        if _is_symmetry(std, index, images, tol):
            found.append(Permutation(images))
    return PermGroup.from_elements(q, found)


# --- Symbol error rate ---


@dataclass(frozen=True)
class SerReport:
    ser_exact: Number
    overlap_bound: Number

    @property
    def margin(self) -> Number:
        return self.overlap_bound - self.ser_exact


def map_decisions(channel: DiscreteChannel, prior: Optional[Sequence[Number]] = None) -> np.ndarray:
    """MAP input per output; ties go to the lowest input index."""
    p = _check_prior(prior, channel)
    joint = p[:, None] * channel.matrix
    return np.array([int(np.argmax(to_float(joint[:, j]))) for j in range(joint.shape[1])])


def ser(channel: DiscreteChannel, prior: Optional[Sequence[Number]] = None) -> SerReport:
    p = _check_prior(prior, channel)
    exact = channel.exact and is_exact(p)
    m = channel.matrix if exact else channel.as_float()
    p = p if exact else to_float(p)
    joint = p[:, None] * m
    correct = sum(max(joint[:, j]) for j in range(joint.shape[1]))
    Q = overlap_matrix(channel)
    if not exact:
        Q = to_float(Q)
    bound = 1 - sum(p[x] * Q[x, x] for x in range(channel.q))
    if not exact:
        return SerReport(ser_exact=float(1 - correct), overlap_bound=float(bound))
    return SerReport(ser_exact=1 - correct, overlap_bound=bound)


# --- Strong concavity ---


@dataclass(frozen=True, eq=False)
class MarkovChain:
    """Joint pmf P(s, t, x) of a chain S - T - X (axes s, t, x)."""

    joint: np.ndarray

    def __post_init__(self) -> None:
        j = np.asarray(self.joint, dtype=np.float64)
        if j.ndim != 3:
            raise NotMarkov("joint must have axes (s, t, x)")
        if np.any(j < 0) or abs(j.sum() - 1.0) > 1e-12:
            raise NotMarkov("joint must be a pmf")
        object.__setattr__(self, "joint", j)

    @property
    def q(self) -> int:
        return self.joint.shape[2]

    def check_markov(self, tol: float = 1e-12) -> None:
        """P(s,t,x) P(t) = P(s,t) P(t,x)."""
        j = self.joint
        pt = j.sum(axis=(0, 2))
        pst = j.sum(axis=2)
        ptx = j.sum(axis=0)
        lhs = j * pt[None, :, None]
        rhs = pst[:, :, None] * ptx[None, :, :]
        if np.max(np.abs(lhs - rhs)) > tol:
            raise NotMarkov("S - T - X factorization fails")


def random_chain(
    q: int, rng: np.random.Generator, n_s: int = 3, n_t: int = 4
) -> MarkovChain:
    pt = rng.dirichlet(np.ones(n_t))
    ps_given_t = rng.dirichlet(np.ones(n_s), size=n_t)  # (t, s)
    px_given_t = rng.dirichlet(np.ones(q), size=n_t)  # (t, x)
    joint = pt[None, :, None] * ps_given_t.T[:, :, None] * px_given_t[None, :, :]
    return MarkovChain(joint=joint / joint.sum())


@dataclass(frozen=True)
class ConcavityReport:
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs


def _conditional_mi(
    joint_cx: np.ndarray, w: np.ndarray, q: int
) -> Tuple[float, np.ndarray, np.ndarray]:
    """I(X;Y|C) for P(c, x), plus P(c) and P(x | c)."""
    pc = joint_cx.sum(axis=1)
    cond = np.zeros_like(joint_cx)
    nz = pc > 0
    cond[nz] = joint_cx[nz] / pc[nz, None]
    total = sum(
        float(pc[c]) * mutual_information(cond[c], w, q) for c in np.flatnonzero(nz)
    )
    return total, pc, cond


def strong_concavity_gap(chain: MarkovChain, channel: DiscreteChannel) -> ConcavityReport:
    if chain.q != channel.q:
        raise InputSizeMismatch("chain and channel disagree on q")
    chain.check_markov()
    q = channel.q
    w = channel.as_float()
    j = chain.joint
    mi_s, _, px_s = _conditional_mi(j.sum(axis=1), w, q)
    mi_t, _, px_t = _conditional_mi(j.sum(axis=0), w, q)
    pst = j.sum(axis=2)
    diff = px_t[None, :, :] - px_s[:, None, :]
    spread = float((pst * (diff**2).sum(axis=2)).sum())
    lam = overlap(channel).lambda_min
    return ConcavityReport(lhs=mi_s - mi_t, rhs=lam**2 / (2 * math.log(q)) * spread)


# --- Trace constraints ---


class TraceCase(str, Enum):
    DOUBLY_TRANSITIVE = "doubly_transitive"
    TRANSITIVE_PRIME = "transitive_prime"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class TraceReport:
    trace: Number
    delta: Number
    case: TraceCase
    transitivity: Transitivity
    distance: Number
    bound: Number
    inequality_holds: bool
    bound_holds: Optional[bool] = field(default=None)


def trace_constraint_check(
    channel: DiscreteChannel, group: Optional[PermGroup] = None
) -> TraceReport:
    """min over b in {1, q} of |tr Q - b| <= 2 q delta, when its hypotheses apply."""
    rep = overlap(channel)
    q = channel.q
    g = group if group is not None else symmetry_group(channel)
    kind = transitivity(g)
    if kind is Transitivity.DOUBLY_TRANSITIVE:
        case = TraceCase.DOUBLY_TRANSITIVE
    elif kind is Transitivity.TRANSITIVE and is_prime(q) and 4 * q * q * rep.delta < 1:
        case = TraceCase.TRANSITIVE_PRIME
    else:
        case = TraceCase.NOT_APPLICABLE
    distance = min(abs(rep.trace - 1), abs(rep.trace - q))
    bound = 2 * q * rep.delta
    holds = le(distance, bound, get_settings().margin_tolerance)
    return TraceReport(
        trace=rep.trace,
        delta=rep.delta,
        case=case,
        transitivity=kind,
        distance=distance,
        bound=bound,
        inequality_holds=holds,
        bound_holds=None if case is TraceCase.NOT_APPLICABLE else holds,
    )


# --- Overlap structure under symmetry ---


@dataclass(frozen=True)
class OverlapSymmetryReport:
    invariant_under_group: bool
    constant_diagonal: bool
    columns_permuted: bool
    diagonal_is_column_max: bool
    constant_off_diagonal: Optional[bool]
    transitivity: Transitivity


def overlap_symmetry_check(
    channel: DiscreteChannel, group: Optional[PermGroup] = None, tol: float = 1e-12
) -> OverlapSymmetryReport:
    """Q_{x,x'} = Q_{sigma x, sigma x'} and the column structure forced by
    transitive and doubly transitive symmetry groups."""
    Q = overlap_matrix(channel)
    exact = channel.exact
    g = group if group is not None else symmetry_group(channel)

    def same(a: np.ndarray, b: np.ndarray) -> bool:
        if exact:
            return bool(np.all(a == b))
        return bool(np.allclose(to_float(a), to_float(b), atol=tol, rtol=0))

    invariant = all(
        same(Q[np.ix_(list(s.images), list(s.images))], Q) for s in g.elements
    )
    q = channel.q
    diag = np.array([Q[i, i] for i in range(q)], dtype=Q.dtype)
    first = np.sort(to_float(Q[:, 0]))
    cols = all(
        np.allclose(np.sort(to_float(Q[:, j])), first, atol=tol, rtol=0) for j in range(q)
    )
    fq = to_float(Q)
    col_max = all(fq[j, j] >= fq[:, j].max() - tol for j in range(q))
    kind = transitivity(g)
    off = None
    if kind is Transitivity.DOUBLY_TRANSITIVE and q > 1:
        offs = fq[~np.eye(q, dtype=bool)]
        off = bool(np.allclose(offs, offs[0], atol=tol, rtol=0))
    return OverlapSymmetryReport(
        invariant_under_group=invariant,
        constant_diagonal=same(diag, np.full(q, diag[0], dtype=Q.dtype)),
        columns_permuted=cols,
        diagonal_is_column_max=col_max,
        constant_off_diagonal=off,
        transitivity=kind,
    )


def pic_list(channel: DiscreteChannel) -> List[float]:
    return [float(v) for v in overlap(channel).pics]
