import pytest
from sympy.combinatorics import Permutation as SympyPermutation
from sympy.combinatorics import PermutationGroup

from grmlab.exceptions import DegreeMismatch, DegreeTooLarge, NotAPermutation
from grmlab.gf import field_of_size
from grmlab.perm import (
    NamedGroup,
    Permutation,
    PermGroup,
    Transitivity,
    conjugate,
    contains_subgroup,
    cyclic_group,
    find_relabelings,
    group_closure,
    intersect,
    join,
    named_group,
    orbit_stabilizer_holds,
    symmetric_group,
    transitivity,
    trivial_group,
)

GENERATOR_SETS = [
    (4, [(1, 0, 2, 3), (0, 2, 1, 3)]),
    (5, [(1, 2, 3, 4, 0)]),
    (5, [(1, 2, 3, 4, 0), (0, 4, 3, 2, 1)]),
    (6, [(1, 0, 3, 2, 5, 4), (2, 3, 0, 1, 4, 5)]),
    (6, [(1, 2, 0, 4, 5, 3)]),
]


def test_permutation_basics():
    p = Permutation((1, 2, 0))
    assert p(0) == 1
    assert p.compose(p.inverse()).is_identity()
    # self after other
    assert p.compose(Permutation((1, 0, 2))).images == (2, 1, 0)
    assert Permutation((0, 2, 1)).fixed_points() == [0]
    with pytest.raises(NotAPermutation):
        Permutation((0, 0, 1))
    with pytest.raises(DegreeMismatch):
        p.compose(Permutation((1, 0)))


@pytest.mark.parametrize("degree,gens", GENERATOR_SETS)
def test_closure_order_matches_sympy(degree, gens):
    ours = group_closure(degree, [Permutation(g) for g in gens])
    oracle = PermutationGroup([SympyPermutation(list(g)) for g in gens])
    assert ours.order == oracle.order()
    assert ours.is_group()
    assert orbit_stabilizer_holds(ours)


def test_standard_groups():
    assert symmetric_group(4).order == 24
    assert cyclic_group(5).order == 5
    assert trivial_group(3).order == 1
    assert transitivity(symmetric_group(4)) is Transitivity.DOUBLY_TRANSITIVE
    assert transitivity(cyclic_group(4)) is Transitivity.TRANSITIVE
    assert transitivity(trivial_group(3)) is Transitivity.INTRANSITIVE


def test_materialization_limit():
    with pytest.raises(DegreeTooLarge):
        symmetric_group(9)


@pytest.mark.parametrize(
    "q,additive,affine",
    [(2, 2, 2), (3, 3, 6), (4, 4, 12), (5, 5, 20), (7, 7, 42), (8, 8, 56)],
)
def test_named_group_orders(q, additive, affine):
    spec = field_of_size(q)
    add = named_group(spec, NamedGroup.ADDITIVE)
    aff = named_group(spec, "affine")
    assert add.order == additive
    assert aff.order == affine
    assert contains_subgroup(aff, add)
    assert transitivity(aff) is Transitivity.DOUBLY_TRANSITIVE


def test_additive_group_is_regular(f4):
    add = named_group(f4, NamedGroup.ADDITIVE)
    assert transitivity(add) is Transitivity.TRANSITIVE
    # every non-identity translation is fixed-point free
    assert all(not g.fixed_points() for g in add if not g.is_identity())


def test_from_elements_rejects_non_groups():
    with pytest.raises(NotAPermutation):
        PermGroup.from_elements(3, [Permutation((0, 1, 2)), Permutation((1, 2, 0))])


def test_intersect_and_join():
    c4 = cyclic_group(4)
    klein = group_closure(4, [Permutation((1, 0, 3, 2)), Permutation((2, 3, 0, 1))])
    common = intersect(c4, klein)
    assert common.order == 2
    assert join(c4, klein).order == 8


def test_relabelings_conjugate_into_group():
    c3 = cyclic_group(3)
    sym = symmetric_group(3)
    # every relabeling keeps C3 inside Sym(3)
    assert len(find_relabelings(sym, c3)) == 6
    # only relabelings normalizing the subgroup keep <(0 1)> inside itself
    swap = group_closure(3, [Permutation((1, 0, 2))])
    found = find_relabelings(swap, swap)
    assert {p.images for p in found} == {(0, 1, 2), (1, 0, 2)}
    for pi in found:
        assert contains_subgroup(swap, conjugate(swap, pi))
