import math
from fractions import Fraction

import pytest

from grmlab import channel as ch
from grmlab.coset import (
    analyze_coset,
    coset_channel,
    coset_overlap,
    coset_ser,
    coset_symmetry_prediction,
    delta_avg,
    hypotheses,
    nondecreasing,
    nonincreasing,
    representative_independence,
    ser_bound_case,
    ser_chain,
    ser_hypotheses,
    weak_bound_check,
)
from grmlab.exceptions import InputSizeMismatch, TooLargeForExact, TOutOfRange
from grmlab.grm import grm_make, linear_code, repetition_code
from grmlab.perm import Transitivity

F = Fraction
GRID = [F(i, 8) for i in range(9)]


@pytest.fixture
def repetition_analysis(repetition):
    return analyze_coset(repetition, ch.identity_channel(2))


def test_repetition_code_polynomials(repetition_analysis):
    a = repetition_analysis
    assert a.exact
    # X_0 is known unless Y_1 is erased
    assert a.trace_poly.coefficients == (2, 1)
    assert a.ser_poly.coefficients == (0, F(1, 2))
    assert a.delta_poly.coefficients == (0, F(1, 2), 0)
    assert a.delta_avg() == F(1, 12)
    assert a.delta(F(1, 2)) == F(1, 8)
    exit_values = a.exit_poly.evaluate_many([0.0, 0.5, 1.0]).tolist()
    assert exit_values == pytest.approx([0.0, 0.5, 1.0])


def test_longer_repetition_code(f2):
    # Q(t) = (1 - t^2) I + t^2 J / 2, so delta(t) = t^2 (1 - t^2) / 2
    a = analyze_coset(repetition_code(f2, 3), ch.identity_channel(2))
    assert a.delta(F(1, 2)) == F(3, 32)
    assert a.delta_avg() == F(1, 15)


def test_pattern_expansion_matches_erased_channel(rm2_1_2):
    w = ch.bsc(F(1, 10))
    a = analyze_coset(rm2_1_2, w)
    for t in (F(0), F(1, 3), F(1, 2), F(1)):
        direct = ch.overlap(coset_channel(rm2_1_2, w, t))
        assert a.trace(t) == direct.trace
        assert a.delta(t) == direct.delta
        assert a.delta_from_definition(t) == a.delta(t)
        assert coset_overlap(rm2_1_2, w, t, analysis=a).trace == direct.trace


def test_per_t_shapes(rm2_1_2):
    a = analyze_coset(rm2_1_2, ch.bsc(F(1, 10)))
    assert a.delta(F(1)) == 0
    assert a.trace(F(1)) == 1
    assert nonincreasing([a.trace(t) for t in GRID])
    assert nondecreasing([a.ser(t) for t in GRID])
    assert all(a.delta(t) >= 0 for t in GRID)
    assert a.delta_avg() == delta_avg(rm2_1_2, ch.bsc(F(1, 10)))


def test_float_channels_give_float_results(rm2_1_2):
    a = analyze_coset(rm2_1_2, ch.bsc(0.1))
    exact = analyze_coset(rm2_1_2, ch.bsc(F(1, 10)))
    assert not a.exact
    assert float(a.delta_avg()) == pytest.approx(float(exact.delta_avg()), abs=1e-12)


def test_t_outside_unit_interval(repetition_analysis):
    with pytest.raises(TOutOfRange):
        repetition_analysis.delta(F(2))


def test_alphabet_mismatch(rm2_1_2):
    with pytest.raises(InputSizeMismatch):
        analyze_coset(rm2_1_2, ch.qsc(3, F(1, 10)))


def test_exact_budget(rm2_1_2, monkeypatch):
    monkeypatch.setenv("GRMLAB_EXACT_BUDGET", "10")
    with pytest.raises(TooLargeForExact):
        analyze_coset(rm2_1_2, ch.bsc(F(1, 10)))


# --- Hypotheses and bounds ---


def test_weak_bound_on_repetition_code(repetition, repetition_analysis):
    rep = weak_bound_check(repetition, ch.identity_channel(2), F(0), repetition_analysis)
    assert rep.hypotheses.hold
    assert rep.in_range and rep.applicable
    assert rep.lower_bound == pytest.approx(math.sqrt(2))
    assert rep.margin == pytest.approx(2 - math.sqrt(2))
    assert rep.holds
    # past 1 - R/C the bound makes no claim
    assert not weak_bound_check(
        repetition, ch.identity_channel(2), F(3, 4), repetition_analysis
    ).in_range


def test_hypotheses_flags(rm3_1_1):
    hyp = hypotheses(rm3_1_1, ch.qsc(3, F(1, 10)), capacity=0.9)
    assert hyp.hold
    assert hyp.flags() == "transitive;matched;r_lt_c"
    # no relabeling of the inputs commutes with this channel
    lopsided = ch.DiscreteChannel.from_rows([[1, 0, 0], [F(1, 4), F(3, 4), 0], [0, 0, 1]])
    assert not hypotheses(repetition_code(rm3_1_1.spec, 2), lopsided, capacity=0.9).matched


def test_mutual_information_bound(repetition_analysis):
    rep = repetition_analysis.mutual_information_bound(F(0))
    assert rep.mutual_information == pytest.approx(1.0)
    assert rep.lower_bound == pytest.approx(0.5)
    assert rep.applicable and rep.holds


def test_ser_bound_not_applicable_above_threshold(repetition, repetition_analysis):
    rep = ser_hypotheses(repetition, ch.identity_channel(2), repetition_analysis)
    assert rep.delta_avg == F(1, 12)
    assert rep.threshold == pytest.approx(0.5 * (2**0.25 - 1) / 2)
    assert not rep.delta_below_threshold
    assert rep.case == "not_applicable"
    assert rep.bound is None and rep.holds is None


def test_ser_bound_doubly_transitive(f2):
    code = repetition_code(f2, 3)
    rep = ser_hypotheses(code, ch.identity_channel(2))
    assert rep.transitivity is Transitivity.DOUBLY_TRANSITIVE
    assert rep.case == "doubly_transitive"
    # 4 delta_avg / (1 - R/C) with delta_avg = 1/15 and R = 1/3
    assert rep.bound == pytest.approx(0.4)
    assert rep.holds
    report = coset_ser(code, ch.identity_channel(2), F(1, 2))
    assert report.ser_exact == F(1, 8)


def test_ser_chain_on_repetition_code(repetition):
    rep = ser_chain(repetition, ch.bsc(F(1, 10)))
    assert rep.per_symbol == (F(1, 10), F(1, 10))
    assert rep.extrinsic == F(1, 10)
    assert rep.max_equals_first
    assert rep.inequality_holds


def test_ser_chain_on_grm_code(rm2_1_2):
    rep = ser_chain(rm2_1_2, ch.bsc(F(1, 10)))
    assert len(set(rep.per_symbol)) == 1
    assert rep.inequality_holds


# --- Symmetry ---


def test_representative_independence(rm2_1_2, rm3_1_1):
    assert representative_independence(rm2_1_2, ch.bsc(F(1, 10)))
    assert representative_independence(rm3_1_1, ch.qsc(3, F(1, 5)))


@pytest.mark.parametrize(
    "code_fixture,channel",
    [("rm2_1_2", ch.bsc(F(1, 10))), ("rm3_1_1", ch.qsc(3, F(1, 10)))],
)
def test_coset_channel_inherits_symmetry(request, code_fixture, channel):
    code = request.getfixturevalue(code_fixture)
    rep = coset_symmetry_prediction(code, channel)
    assert rep.contains_additive
    assert rep.contains_prediction
    assert rep.transitivity is not Transitivity.INTRANSITIVE


def test_ser_bound_cases():
    # R = 1/3, C = 1: threshold (2/3)(3^(1/3) - 1)/3, prime-case limit (2/3)/72
    prime = ser_bound_case(3, 1.0, 1 / 3, 0.001, Transitivity.TRANSITIVE)
    assert prime.case == "transitive_prime"
    assert prime.bound == pytest.approx(0.006)
    assert ser_bound_case(4, 1.0, 1 / 3, 0.001, Transitivity.TRANSITIVE).bound is None
    unknown = ser_bound_case(3, 1.0, 1 / 3, 0.001, None)
    assert unknown.case == "unknown" and unknown.bound is None
    # above the threshold nothing else matters
    assert ser_bound_case(3, 1.0, 1 / 3, 0.2, None).case == "not_applicable"
    assert ser_bound_case(2, 0.5, 0.75, 0.0, Transitivity.DOUBLY_TRANSITIVE).bound is None


def test_hypotheses_on_bare_generator(f2):
    plain = linear_code(f2, grm_make(f2, 1, 4).generator)
    assert hypotheses(plain, ch.bsc(F(1, 10)), capacity=0.9).transitive
