import math
from fractions import Fraction

import pytest

from grmlab import channel as ch
from grmlab.coset import analyze_coset
from grmlab.exceptions import InputSizeMismatch, TOutOfRange
from grmlab.montecarlo import mc_coset

F = Fraction


def test_worker_count_does_not_change_results(rm2_1_2):
    w = ch.bsc(F(1, 10))
    single = mc_coset(rm2_1_2, w, 0.5, 10_000, seed=5, workers=1, n_boot=20)
    pooled = mc_coset(rm2_1_2, w, 0.5, 10_000, seed=5, workers=4, n_boot=20)
    assert single.to_dict() == pooled.to_dict()


def test_seed_changes_the_draw(rm2_1_2):
    w = ch.bsc(F(1, 10))
    a = mc_coset(rm2_1_2, w, 0.5, 2_000, seed=1, n_boot=10)
    b = mc_coset(rm2_1_2, w, 0.5, 2_000, seed=2, n_boot=10)
    assert a.delta != b.delta


def test_intervals_cover_exact_values(rm2_1_2):
    w = ch.bsc(F(1, 10))
    exact = analyze_coset(rm2_1_2, w)
    for t in (F(0), F(1, 2)):
        rep = mc_coset(rm2_1_2, w, float(t), 40_000, seed=0, n_boot=100)
        assert rep.delta_ci.contains(float(exact.delta(t)), tol=0.01)
        assert rep.ser_ci.contains(float(exact.ser(t)), tol=0.01)
        assert rep.trace_ci.contains(float(exact.trace(t)), tol=0.02)
        assert rep.delta_ci.width < 0.05


def test_fully_erased_outputs_carry_nothing(rm2_1_2):
    rep = mc_coset(rm2_1_2, ch.bsc(F(1, 10)), 1.0, 1_000, n_boot=10)
    assert rep.delta == pytest.approx(0.0, abs=1e-12)
    assert rep.ser == pytest.approx(0.5)
    assert rep.trace == pytest.approx(1.0)


def test_report_serializes_overlap(rm3_1_1):
    rep = mc_coset(rm3_1_1, ch.qsc(3, F(1, 5)), 0.25, 3_000, n_boot=10)
    data = rep.to_dict()
    assert len(data["Q"]) == 3
    assert data["n_samples"] == 3_000
    assert data["delta_ci"][0] <= data["delta_ci"][1]


def test_argument_errors(rm2_1_2):
    with pytest.raises(TOutOfRange):
        mc_coset(rm2_1_2, ch.bsc(F(1, 10)), 1.5, 100)
    with pytest.raises(InputSizeMismatch):
        mc_coset(rm2_1_2, ch.qsc(3, F(1, 10)), 0.5, 100)


def test_interval_width_scales_with_sample_count(rm2_1_2):
    w = ch.bsc(F(1, 10))
    small = mc_coset(rm2_1_2, w, 0.5, 20_000, seed=3, n_boot=400)
    large = mc_coset(rm2_1_2, w, 0.5, 40_000, seed=3, n_boot=400)
    for narrow, wide in [
        (large.delta_ci, small.delta_ci),
        (large.ser_ci, small.ser_ci),
        (large.trace_ci, small.trace_ci),
    ]:
        assert wide.width / narrow.width == pytest.approx(math.sqrt(2), rel=0.2)


@pytest.mark.slow
def test_intervals_are_calibrated_against_exact_values(rm2_1_2):
    w = ch.bsc(F(1, 10))
    t = F(1, 2)
    exact = analyze_coset(rm2_1_2, w)
    targets = {
        "delta": float(exact.delta(t)),
        "ser": float(exact.ser(t)),
        "trace": float(exact.trace(t)),
    }
    hits = dict.fromkeys(targets, 0)
    for seed in range(100):
        rep = mc_coset(rm2_1_2, w, float(t), 100_000, seed=seed, n_boot=500)
        intervals = {"delta": rep.delta_ci, "ser": rep.ser_ci, "trace": rep.trace_ci}
        for name, value in targets.items():
            hits[name] += intervals[name].contains(value)
    assert all(count >= 97 for count in hits.values()), hits
