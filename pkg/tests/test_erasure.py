from fractions import Fraction

import pytest

from grmlab.erasure import ErasurePolynomial, pattern_sum

F = Fraction


def test_evaluate_in_pattern_basis():
    # 2 (1 - t) + t = 2 - t
    p = ErasurePolynomial.from_coefficients([2, 1])
    assert p.exact
    assert p(F(1, 4)) == F(7, 4)
    assert p.evaluate(0.5) == pytest.approx(1.5)


def test_integral_is_exact():
    p = ErasurePolynomial.from_coefficients([0, F(1, 2), 0])
    assert p.integral() == F(1, 12)
    assert ErasurePolynomial.constant(F(3), degree=4).integral() == 3


def test_elevation_keeps_values():
    p = ErasurePolynomial.from_coefficients([F(1), F(-2), F(5)])
    high = p.elevate(5)
    assert high.degree == 5
    for t in (F(0), F(1, 3), F(2, 5), F(1)):
        assert high(t) == p(t)
    with pytest.raises(ValueError):
        high.elevate(2)


def test_products_and_sums():
    a = ErasurePolynomial.from_coefficients([1, 0])  # 1 - t
    b = ErasurePolynomial.from_coefficients([0, 1])  # t
    prod = a * b
    assert prod.degree == 2
    assert prod(F(1, 2)) == F(1, 4)
    assert (a + b).coefficients == (1, 1)
    assert (a - a).coefficients == (0, 0)
    assert a.scale(F(1, 2))(0) == F(1, 2)


def test_nonnegative_certificate():
    assert ErasurePolynomial.from_coefficients([0, 1, 0]).nonnegative_certificate()
    assert not ErasurePolynomial.from_coefficients([1, -1]).nonnegative_certificate()


def test_pattern_sum_fills_missing_sizes():
    p = pattern_sum({0: F(3)}, 2)
    assert p.coefficients == (3, 0, 0)


def test_float_coefficients_stay_float():
    p = ErasurePolynomial.from_coefficients([0.5, 0.25])
    assert not p.exact
    assert p.integral() == pytest.approx(0.375)


def test_json_form():
    data = ErasurePolynomial.from_coefficients([F(1, 2), 0]).to_json()
    assert data["degree"] == 1
    assert data["coefficients"] == ["1/2", "0/1"]
