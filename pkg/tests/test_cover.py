import math
from fractions import Fraction

import numpy as np
import pytest

from grmlab import channel as ch
from grmlab.cover import (
    default_family,
    dexit_grm_bound,
    efron_stein_decompose,
    efron_stein_standalone,
    rate_cover_bound,
    subset_family,
)
from grmlab.exceptions import IntersectionNotZero, MTooSmall, ZeroMinPIC
from grmlab.grm import grm_make

F = Fraction


def test_subset_family_shape():
    family = subset_family(2, 4)
    # k = 1: B_0 = [8] and seven complements of a point
    assert len(family) == 8
    assert family[0] == list(range(8))
    assert all(len(s) == 15 for s in family[1:])
    assert set.intersection(*(set(s) for s in family)) == {0}
    with pytest.raises(MTooSmall):
        subset_family(2, 1)


def test_default_family_for_short_codes(repetition, rm2_1_2):
    assert default_family(repetition) == [[0]]
    # k = 1: B_0 = [2] and the complement of position 1
    assert default_family(rm2_1_2) == [[0, 1], [0, 2, 3]]


def test_cover_bound_on_repetition_code(repetition):
    rep = rate_cover_bound(repetition, ch.identity_channel(2))
    assert len(rep.terms) == 1
    assert rep.terms[0].excess == F(1, 2)
    assert rep.lambda_min == pytest.approx(1.0)
    assert rep.bound == pytest.approx(math.log(2))
    assert rep.all_transitive


def test_efron_stein_on_repetition_code(repetition):
    rep = efron_stein_decompose(repetition, ch.identity_channel(2))
    (term,) = rep.terms
    # (tr Q(t) - 1) / 2 = (1 - t) / 2
    assert term.poly.coefficients == (F(1, 2), 0)
    assert term.integral == F(1, 4)
    assert term.holds
    assert rep.delta_avg == F(1, 12)
    assert rep.decomposition_holds and rep.cover_holds
    assert rep.pointwise(F(1, 2))


def test_efron_stein_on_grm_code(rm2_1_2):
    rep = efron_stein_decompose(rm2_1_2, ch.bsc(F(1, 10)))
    assert rep.decomposition_holds
    assert all(rep.pointwise(F(i, 4)) for i in range(5))


def test_family_must_meet_in_zero(rm2_1_2):
    with pytest.raises(IntersectionNotZero):
        rate_cover_bound(rm2_1_2, ch.bsc(F(1, 10)), family=[[0, 1], [0, 1, 2]])


def test_standalone_efron_stein():
    rng = np.random.default_rng(11)
    for _ in range(20):
        rep = efron_stein_standalone(rng)
        assert rep.margin >= -1e-12


def test_dexit_grm_bound():
    assert dexit_grm_bound(2, 4, 1.0) == pytest.approx(2 * math.log(2) * 6.5)
    assert dexit_grm_bound(2, 4, 1.0) == pytest.approx(9.0109, abs=1e-4)
    with pytest.raises(MTooSmall):
        dexit_grm_bound(3, 8, 1.0)
    with pytest.raises(ZeroMinPIC):
        dexit_grm_bound(2, 4, 0.0)


def test_cover_of_larger_grm_code(f2):
    code = grm_make(f2, 1, 4)
    rep = rate_cover_bound(code, ch.bsc(F(1, 20)))
    assert len(rep.terms) == 8
    assert rep.rate_sum >= 0
    assert rep.all_transitive
