from fractions import Fraction

import numpy as np
import pytest

from grmlab import channel as ch
from grmlab.area import area_check, entropy_area_check, exit_curve, subset_transitive
from grmlab.exceptions import InputSizeMismatch, NotTransitive, ZeroNotInS
from grmlab.grm import grm_make, linear_code

F = Fraction


def test_exit_curve_of_repetition_code(repetition):
    curve = exit_curve(repetition, ch.identity_channel(2))
    # Y_1 pins down X_0, so only the erased pattern carries information
    assert list(curve.coefficients) == pytest.approx([0.0, 1.0])
    assert float(curve.integral()) == pytest.approx(0.5)


# binary symmetric erasure channel: flip w.p. 1/10, erase w.p. 1/5
BSEC = ch.DiscreteChannel.from_rows(
    [[F(7, 10), F(1, 5), F(1, 10)], [F(1, 10), F(1, 5), F(7, 10)]]
)


@pytest.mark.parametrize(
    "code_fixture,channel",
    [
        ("rm2_1_2", ch.bec(F(1, 4))),
        ("rm2_1_2", ch.bsc(F(1, 10))),
        ("rm2_1_2", BSEC),
        ("rm3_1_1", ch.qsc(3, F(1, 5))),
        ("rm3_1_1", ch.qec(3, F(1, 4))),
        ("rm3_1_1", ch.additive_noise(3, [F(2, 3), F(1, 4), F(1, 12)])),
    ],
)
def test_area_theorems_on_symmetric_channels(request, code_fixture, channel):
    code = request.getfixturevalue(code_fixture)
    rep = area_check(code, channel)
    assert rep.subset == list(range(code.length))
    assert abs(rep.difference) <= 1e-10
    assert abs(entropy_area_check(code, channel).difference) <= 1e-10


def test_area_theorem_on_float_channel(rm2_1_2):
    assert area_check(rm2_1_2, ch.bsc(0.2)).holds


def test_area_theorem_on_bare_generator(f2, rm2_1_2):
    # transitivity comes from the automorphism search, not the affine labels
    plain = linear_code(f2, rm2_1_2.generator)
    assert area_check(plain, ch.bec(F(1, 4))).holds


def test_area_theorem_on_prefix_subset(f2):
    code = grm_make(f2, 1, 3)
    assert subset_transitive(code, [0, 1, 2, 3])
    rep = area_check(code, ch.bec(F(1, 3)), subset=[0, 1, 2, 3])
    assert rep.subset == [0, 1, 2, 3]
    assert rep.holds


def test_entropy_curve_vanishes_without_noise(repetition):
    rep = entropy_area_check(repetition, ch.identity_channel(2))
    assert rep.integral == pytest.approx(0.0)
    assert rep.rhs == pytest.approx(0.0)


def test_subset_must_contain_zero(rm2_1_2):
    with pytest.raises(ZeroNotInS):
        area_check(rm2_1_2, ch.bsc(F(1, 10)), subset=[1, 2])


def test_intransitive_code_is_rejected(f2):
    lopsided = linear_code(f2, np.array([[1, 1, 0], [0, 0, 1]]))
    with pytest.raises(NotTransitive):
        area_check(lopsided, ch.bsc(F(1, 10)))
    # the caller may vouch for transitivity instead
    rep = area_check(lopsided, ch.bsc(F(1, 10)), assume_transitive=True)
    assert rep.subset == [0, 1, 2]


def test_alphabet_mismatch(rm2_1_2):
    with pytest.raises(InputSizeMismatch):
        exit_curve(rm2_1_2, ch.qsc(3, F(1, 10)))
