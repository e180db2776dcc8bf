import math
from fractions import Fraction

import numpy as np
import pytest

from grmlab.exceptions import (
    DegeneratePosition,
    DegreeOutOfRange,
    EmptyIndexSet,
    InvalidIndexSet,
    KTooLarge,
)
from grmlab.gf import field_of_size
from grmlab.grm import (
    affine_index_perm,
    automorphism_generators,
    automorphism_transitivity,
    code_transitivity,
    coset,
    exact_rate,
    export_json,
    family_depth,
    find_automorphism,
    format_generator,
    grm_make,
    is_automorphism,
    linear_code,
    monomial_count,
    monomial_set,
    preimage_multiplicities,
    puncture,
    puncture_check,
    rate,
    rate_diff_bound,
    rate_sum_bound,
    relabel_group,
    repetition_code,
    sample_codeword,
)
from grmlab.perm import Transitivity


def test_exact_rates():
    assert exact_rate(3, 2, 2) == Fraction(2, 3)
    assert exact_rate(2, 1, 2) == Fraction(3, 4)
    # binary RM: sum of binomials
    assert exact_rate(2, 2, 5) == Fraction(1 + 5 + 10, 32)
    assert exact_rate(4, 9, 3) == 1
    assert monomial_count(3, -1, 4) == 0


def test_monomial_count_matches_enumeration():
    for q, m in [(2, 4), (3, 3), (4, 2), (5, 2)]:
        for r in range(m * (q - 1) + 1):
            assert len(monomial_set(q, r, m)) == monomial_count(q, r, m)


def test_rate_report():
    rep = rate(3, 2, 2)
    assert rep.exact == Fraction(2, 3)
    assert 0.0 < rep.gaussian < 1.0
    assert rep.error == pytest.approx(abs(2 / 3 - rep.gaussian))
    with pytest.raises(DegreeOutOfRange):
        rate(2, 1, 0)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_berry_esseen_envelope(q):
    for m in range(q * q, 31):
        for r in range(m * (q - 1) + 1):
            rep = rate(q, r, m)
            assert rep.error <= 1 / math.sqrt(m), (q, r, m)
            assert rep.be_bound <= 1 / math.sqrt(m)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_rate_difference_over_grid(q):
    for m in range(q * q, 31):
        for r in range(m * (q - 1) + 1):
            for k in range(max(0, m - r)):
                rep = rate_diff_bound(q, r, m, k)
                assert rep.hypotheses_hold
                assert rep.difference <= rep.bound, (q, r, m, k)


def test_rate_difference():
    rep = rate_diff_bound(2, 1, 4, 1)
    assert rep.difference == Fraction(3, 16)
    assert rep.bound == pytest.approx(4 / math.sqrt(3))
    assert rep.hypotheses_hold and rep.holds
    assert not rate_diff_bound(2, 3, 4, 1).hypotheses_hold
    with pytest.raises(KTooLarge):
        rate_diff_bound(2, 1, 4, 4)


def test_family_depth():
    assert family_depth(2, 4) == 1
    assert family_depth(2, 5) == 2
    assert family_depth(3, 9) == 1
    assert family_depth(3, 10) == 2


def test_rate_sum_envelope():
    for q, m in [(2, 4), (2, 9), (3, 9)]:
        for r in range(m * (q - 1) + 1):
            rep = rate_sum_bound(q, r, m)
            assert rep.rate_sum >= 0
            assert float(rep.rate_sum) <= rep.envelope


# --- Construction ---


def test_grm_dimensions(f2, f3):
    code = grm_make(f2, 1, 3)
    assert (code.length, code.dimension) == (8, 4)
    assert repr(code) == "RM_2(1,3)"
    assert grm_make(f3, 2, 2).dimension == 6
    with pytest.raises(DegreeOutOfRange):
        grm_make(f2, 4, 3)


def test_first_order_binary_code_has_minimum_distance_four(f2):
    words = grm_make(f2, 1, 3).codewords
    weights = (words != 0).sum(axis=1)
    assert sorted(set(weights.tolist())) == [0, 4, 8]


def test_full_degree_code_is_everything(f3):
    code = grm_make(f3, 2, 1)
    assert code.size == 27
    assert code.contains([2, 0, 1])


def test_prime_power_codes_are_linear(f4):
    code = grm_make(f4, 1, 2)
    words = code.codewords
    rng = np.random.default_rng(4)
    for _ in range(10):
        a, b = words[rng.integers(len(words), size=2)]
        total = f4.add_table[a, b]
        assert code.contains(total)


def test_linear_code_reduces_generator(f2):
    code = linear_code(f2, np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]]))
    assert code.dimension == 2
    assert code.same_code(linear_code(f2, np.array([[1, 0, 1], [1, 1, 0]])))


def test_export_and_format(f3):
    code = grm_make(f3, 1, 1)
    data = export_json(code)
    assert data["q"] == 3 and data["N"] == 3 and data["k"] == 2
    assert data["r"] == 1 and data["m"] == 1
    assert data["generator"][0] == "111"
    assert format_generator(code).splitlines()[0] == "RM_3(1,1)"


# --- Puncturing ---


@pytest.mark.parametrize(
    "q,r,m,k,multiplicity",
    [(2, 1, 3, 1, 2), (2, 2, 4, 1, 16), (3, 1, 2, 1, 3), (3, 2, 3, 1, 81), (4, 1, 2, 1, 4)],
)
def test_puncture_first_positions(q, r, m, k, multiplicity):
    rep = puncture_check(field_of_size(q), r, m, k)
    assert rep.row_space_equal
    assert rep.expected_multiplicity == multiplicity
    assert list(rep.multiplicities) == [multiplicity]
    assert rep.passed


def test_puncture_errors(rm2_1_2):
    with pytest.raises(EmptyIndexSet):
        puncture(rm2_1_2, [])
    with pytest.raises(InvalidIndexSet):
        puncture(rm2_1_2, [2, 1])
    with pytest.raises(InvalidIndexSet):
        puncture(rm2_1_2, [0, 4])


def test_preimage_multiplicities(rm2_1_2):
    assert preimage_multiplicities(rm2_1_2, [0]) == {4: 2}
    assert preimage_multiplicities(rm2_1_2, [0, 1, 2, 3]) == {1: 8}


# --- Automorphisms and relabelings ---


@pytest.mark.parametrize("q,r,m", [(2, 1, 3), (3, 1, 2), (4, 1, 2)])
def test_affine_automorphisms(q, r, m):
    code = grm_make(field_of_size(q), r, m)
    gens = automorphism_generators(code)
    assert all(is_automorphism(code, g) for g in gens)
    assert automorphism_transitivity(code) is Transitivity.DOUBLY_TRANSITIVE


def test_translation_moves_origin(f3):
    code = grm_make(f3, 1, 2)
    pi = affine_index_perm(code, np.eye(2, dtype=int), [1, 0])
    assert pi(0) == 1
    assert pi(2) == 0


def test_code_transitivity_of_general_codes(f2):
    assert code_transitivity(repetition_code(f2, 3)) is Transitivity.DOUBLY_TRANSITIVE
    lopsided = linear_code(f2, np.array([[1, 1, 0], [0, 0, 1]]))
    assert code_transitivity(lopsided) is Transitivity.INTRANSITIVE
    # pairs {0, 1} and {2, 3} may swap, but 0 stays with 1
    paired = linear_code(f2, np.array([[1, 1, 0, 0], [0, 0, 1, 1]]))
    assert code_transitivity(paired) is Transitivity.TRANSITIVE


def test_code_transitivity_without_affine_labels(f2):
    # RM_2(1,4) handed over as a bare generator has no transposition automorphisms
    plain = linear_code(f2, grm_make(f2, 1, 4).generator)
    assert code_transitivity(plain) is Transitivity.DOUBLY_TRANSITIVE
    pi = find_automorphism(plain, {0: 5})
    assert pi is not None and pi(0) == 5
    assert is_automorphism(plain, pi)
    assert find_automorphism(plain, {0: 1, 1: 1}) is None


def test_relabel_group(f3):
    # affine codes are closed under x -> a x + b on the alphabet
    assert relabel_group(grm_make(f3, 1, 1)).order == 6
    # constant words stay constant under any relabeling
    assert relabel_group(grm_make(f3, 0, 2)).order == 6
    assert relabel_group(linear_code(f3, np.array([[1, 2, 0]]))).order == 2


# --- Cosets and sampling ---


def test_coset_fixes_first_symbol(rm2_1_2):
    ones = coset(rm2_1_2, 1)
    assert len(ones) == 4
    assert set(ones[:, 0].tolist()) == {1}


def test_degenerate_position(f2):
    code = linear_code(f2, np.array([[0, 1, 1]]))
    with pytest.raises(DegeneratePosition):
        coset(code, 0)


def test_sampling_is_seeded(rm3_1_1):
    a = sample_codeword(rm3_1_1, seed=3, size=20)
    b = sample_codeword(rm3_1_1, seed=3, size=20)
    np.testing.assert_array_equal(a, b)
    assert all(rm3_1_1.contains(w) for w in a)
