"""Exact/floating number plumbing shared by the analysis modules.

Exact values are ``fractions.Fraction`` held in numpy object arrays; anything
that touches a float becomes float64.
"""

import math
from fractions import Fraction
from numbers import Rational
from typing import Any, Iterable, Union

import numpy as np
from scipy.special import xlogy

Number = Union[Fraction, float]


def parse_entry(value: Any) -> Number:
    """Accept "num/den" strings, ints, Fractions and floats."""
    if isinstance(value, bool):
        raise ValueError("booleans are not probabilities")
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, np.integer):
        return Fraction(int(value))
    raise ValueError(f"cannot read {value!r} as a probability")


def as_array(values: Iterable[Any]) -> np.ndarray:
    """Object array of Fractions if every entry is exact, else float64."""
    parsed = np.array(
        [[parse_entry(v) for v in row] for row in values], dtype=object
    )
    if parsed.size and all(isinstance(v, Fraction) for v in parsed.flat):
        return parsed
    return parsed.astype(np.float64)


def is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def is_exact_scalar(value: Any) -> bool:
    return isinstance(value, (Fraction, int)) and not isinstance(value, bool)


def to_float(arr: Any) -> np.ndarray:
    return np.asarray(arr, dtype=object).astype(np.float64)


def exact_like(value: Any, exact: bool) -> Number:
    """Coerce a scalar to the pipeline's number kind."""
    if exact and is_exact_scalar(value):
        return Fraction(value)
    return float(value)


def format_number(value: Any) -> Union[str, float]:
    """Fractions serialize as "num/den"; floats stay floats."""
    if isinstance(value, Fraction) or (isinstance(value, int) and not isinstance(value, bool)):
        f = Fraction(value)
        return f"{f.numerator}/{f.denominator}"
    return float(value)


def format_matrix(arr: np.ndarray) -> list:
    return [[format_number(v) for v in row] for row in arr]


def entropy(p: np.ndarray, base: float) -> float:
    """Shannon entropy of a pmf, log base ``base``."""
    p = to_float(p).ravel()
    return float(-xlogy(p, p).sum() / math.log(base))


def mutual_information(prior: np.ndarray, matrix: np.ndarray, base: float) -> float:
    """I(X;Y) for X ~ prior through row-stochastic ``matrix``."""
    prior = to_float(prior)
    w = to_float(matrix)
    joint = prior[:, None] * w
    py = joint.sum(axis=0)
    return entropy(py, base) - float(prior @ np.array([entropy(r, base) for r in w]))


def le(a: Number, b: Number, tol: float) -> bool:
    """a <= b, exact when both sides are Fractions."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a <= b
    return float(a) <= float(b) + tol


def margin(upper: Number, lower: Number) -> Number:
    """Signed slack of ``lower <= upper``."""
    if isinstance(upper, Fraction) and isinstance(lower, Fraction):
        return upper - lower
    return float(upper) - float(lower)
