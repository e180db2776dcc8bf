"""Small permutation groups: closure, orbits, transitivity and named groups."""

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations
from typing import FrozenSet, Iterable, List, Sequence, Set, Tuple

from .exceptions import DegreeMismatch, DegreeTooLarge, NotAPermutation
from .gf import FieldSpec

# |Sym(8)| = 40320 is the largest group we materialize
MAX_MATERIALIZED_DEGREE = 8


class Transitivity(str, Enum):
    INTRANSITIVE = "intransitive"
    TRANSITIVE = "transitive"
    DOUBLY_TRANSITIVE = "doubly_transitive"


class NamedGroup(str, Enum):
    ADDITIVE = "additive"
    AFFINE = "affine"


@dataclass(frozen=True, order=True)
class Permutation:
    """images[x] is the image of x."""

    images: Tuple[int, ...]

    def __post_init__(self) -> None:
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise NotAPermutation(f"{list(imgs)} is not a bijection of [{len(imgs)}]")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: x -> self(other(x))."""
        if other.degree != self.degree:
            raise DegreeMismatch("cannot compose permutations of different degree")
        return Permutation(tuple(self.images[i] for i in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.images))

    def fixed_points(self) -> List[int]:
        return [x for x, y in enumerate(self.images) if x == y]

    def to_json(self) -> List[int]:
        return list(self.images)


def _compose(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(a[i] for i in b)


@dataclass(frozen=True, eq=False)
class PermGroup:
    degree: int
    generators: Tuple[Permutation, ...]
    elements: Tuple[Permutation, ...]
    _members: FrozenSet[Tuple[int, ...]] = field(repr=False, default=frozenset())

    @classmethod
    def from_elements(cls, degree: int, elements: Iterable[Permutation]) -> "PermGroup":
        """Rebuild a group from its element set, checking the set is one."""
        elems = sorted(set(elements))
        gens: List[Permutation] = []
        current = group_closure(degree, gens)
        for e in elems:
            if e not in current:
                gens.append(e)
                current = group_closure(degree, gens)
        if current._members != frozenset(e.images for e in elems):
            raise NotAPermutation("element set is not closed under composition")
        return current

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, sigma: Permutation) -> bool:
        return sigma.images in self._members

    def __iter__(self):
        return iter(self.elements)

    def is_group(self) -> bool:
        """Exhaustive closure and inverse check; Lagrange on the side."""
        if not self.elements or tuple(range(self.degree)) not in self._members:
            return False
        if math.factorial(self.degree) % self.order:
            return False
        for a in self.elements:
            if a.inverse().images not in self._members:
                return False
            for b in self.elements:
                if _compose(a.images, b.images) not in self._members:
                    return False
        return True

    def to_json(self) -> List[List[int]]:
        return [e.to_json() for e in self.elements]


def group_closure(degree: int, generators: Sequence[Permutation]) -> PermGroup:
    if degree > MAX_MATERIALIZED_DEGREE:
        raise DegreeTooLarge(
            f"degree {degree} exceeds {MAX_MATERIALIZED_DEGREE} for materialization"
        )
    gens = [g if isinstance(g, Permutation) else Permutation(tuple(g)) for g in generators]
    for g in gens:
        if g.degree != degree:
            raise DegreeMismatch(f"generator of degree {g.degree}, expected {degree}")
    ident = tuple(range(degree))
    seen: Set[Tuple[int, ...]] = {ident}
    queue = deque([ident])
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = _compose(g.images, cur)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    elems = tuple(Permutation(e) for e in sorted(seen))
    return PermGroup(
        degree=degree, generators=tuple(gens), elements=elems, _members=frozenset(seen)
    )


def symmetric_group(degree: int) -> PermGroup:
    if degree > MAX_MATERIALIZED_DEGREE:
        raise DegreeTooLarge(f"Sym({degree}) is too large to materialize")
    gens: List[Permutation] = []
    if degree >= 2:
        gens.append(Permutation((1, 0) + tuple(range(2, degree))))
        gens.append(Permutation(tuple(range(1, degree)) + (0,)))
    return group_closure(degree, gens)


def cyclic_group(degree: int) -> PermGroup:
    if degree < 2:
        return trivial_group(degree)
    return group_closure(degree, [Permutation(tuple(range(1, degree)) + (0,))])


def trivial_group(degree: int) -> PermGroup:
    return group_closure(degree, [])


# --- Orbits ---


def orbit(degree: int, generators: Sequence[Permutation], start: int) -> List[int]:
    """Orbit of a point under the group generated by ``generators``."""
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in generators:
            y = g.images[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def pair_orbit_size(degree: int, generators: Sequence[Permutation], pair: Tuple[int, int]) -> int:
    seen = {pair}
    queue = deque([pair])
    while queue:
        a, b = queue.popleft()
        for g in generators:
            nxt = (g.images[a], g.images[b])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen)


def transitivity_of(degree: int, generators: Sequence[Permutation]) -> Transitivity:
    """Classify the group generated by ``generators`` without materializing it.

    Degree 1 counts as doubly transitive (there are no pairs to separate).
    """
    if degree <= 1:
        return Transitivity.DOUBLY_TRANSITIVE
    if len(orbit(degree, generators, 0)) < degree:
        return Transitivity.INTRANSITIVE
    if pair_orbit_size(degree, generators, (0, 1)) == degree * (degree - 1):
        return Transitivity.DOUBLY_TRANSITIVE
    return Transitivity.TRANSITIVE


def transitivity(group: PermGroup) -> Transitivity:
    return transitivity_of(group.degree, group.elements)


def group_orbit(group: PermGroup, x: int) -> List[int]:
    return sorted({g.images[x] for g in group.elements})


def stabilizer(group: PermGroup, x: int) -> List[Permutation]:
    return [g for g in group.elements if g.images[x] == x]


def orbit_stabilizer_holds(group: PermGroup) -> bool:
    return all(
        len(group_orbit(group, x)) * len(stabilizer(group, x)) == group.order
        for x in range(group.degree)
    )


# --- Groups coming from F_q ---


def affine_map(spec: FieldSpec, a: int, b: int) -> Permutation:
    """x -> a x + b on F_q (rank representation)."""
    return Permutation(tuple(spec.add(spec.mul(a, x), b) for x in range(spec.q)))


def named_group(spec: FieldSpec, which: NamedGroup | str) -> PermGroup:
    which = NamedGroup(which)
    if spec.q > MAX_MATERIALIZED_DEGREE:
        raise DegreeTooLarge(f"q = {spec.q} exceeds {MAX_MATERIALIZED_DEGREE}")
    gens = [affine_map(spec, 1, b) for b in range(1, spec.q)]
    if which is NamedGroup.AFFINE and spec.q > 2:
        gens.append(affine_map(spec, spec.beta, 0))
    return group_closure(spec.q, gens)


def contains_subgroup(group: PermGroup, sub: PermGroup) -> bool:
    if group.degree != sub.degree:
        raise DegreeMismatch(f"degrees differ: {group.degree} vs {sub.degree}")
    return all(h in group for h in sub.elements)


def conjugate(sub: PermGroup, pi: Permutation) -> PermGroup:
    """pi H pi^-1."""
    inv = pi.inverse()
    elems = [pi.compose(h).compose(inv) for h in sub.elements]
    return PermGroup(
        degree=sub.degree,
        generators=tuple(pi.compose(g).compose(inv) for g in sub.generators),
        elements=tuple(sorted(elems)),
        _members=frozenset(e.images for e in elems),
    )


def find_relabelings(group: PermGroup, sub: PermGroup) -> List[Permutation]:
    """All input relabelings pi with pi H pi^-1 contained in G.

    No canonical choice is made; callers get the whole search space.
    """
    if group.degree != sub.degree:
        raise DegreeMismatch(f"degrees differ: {group.degree} vs {sub.degree}")
    if group.degree > MAX_MATERIALIZED_DEGREE:
        raise DegreeTooLarge("relabeling search is limited to degree 8")
    found: List[Permutation] = []
    for images in permutations(range(group.degree)):
        pi = Permutation(images)
        if contains_subgroup(group, conjugate(sub, pi)):
            found.append(pi)
    return found


def intersect(a: PermGroup, b: PermGroup) -> PermGroup:
    if a.degree != b.degree:
        raise DegreeMismatch(f"degrees differ: {a.degree} vs {b.degree}")
    common = [g for g in a.elements if g in b]
    return PermGroup(
        degree=a.degree,
        generators=tuple(common),
        elements=tuple(common),
        _members=frozenset(g.images for g in common),
    )


def join(a: PermGroup, b: PermGroup) -> PermGroup:
    """The group generated by both."""
    if a.degree != b.degree:
        raise DegreeMismatch(f"degrees differ: {a.degree} vs {b.degree}")
    gens = list(a.generators or a.elements) + list(b.generators or b.elements)
    return group_closure(a.degree, gens)

