"""Polynomials in the erasure probability t, kept in the pattern basis
{t^a (1 - t)^(n - a) : 0 <= a <= n}.

A sum over erasure patterns E of f(E) t^|E| (1 - t)^(n - |E|) is stored as
the coefficient list c_a = sum of f(E) over |E| = a, so integrals over t in
[0, 1] are exact Beta integrals a! (n - a)! / (n + 1)!.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Any, Dict, List, Sequence, Union

import numpy as np

from .numeric import Number, format_number, is_exact_scalar

Scalar = Union[Fraction, float, int]


@dataclass(frozen=True, eq=False)
class ErasurePolynomial:
    coefficients: tuple

    @classmethod
    def from_coefficients(cls, coefficients: Sequence[Scalar]) -> "ErasurePolynomial":
        if not len(coefficients):
            raise ValueError("a polynomial needs at least one coefficient")
        return cls(tuple(_normalize(c) for c in coefficients))

    @classmethod
    def constant(cls, value: Scalar, degree: int = 0) -> "ErasurePolynomial":
        return cls.from_coefficients([value]).elevate(degree)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coefficients)

    def __call__(self, t: Scalar) -> Number:
        return self.evaluate(t)

    def evaluate(self, t: Scalar) -> Number:
        n = self.degree
        if not (is_exact_scalar(t) and self.exact):
            t = float(t)
        s = 1 - t
        return sum(c * t**a * s ** (n - a) for a, c in enumerate(self.coefficients))

    def evaluate_many(self, ts: Sequence[float]) -> np.ndarray:
        return np.array([float(self.evaluate(float(t))) for t in ts])

    def integral(self) -> Number:
        """Integral over [0, 1]."""
        n = self.degree
        return sum(
            c * Fraction(1, (n + 1) * comb(n, a)) if isinstance(c, Fraction)
            else c / ((n + 1) * comb(n, a))
            for a, c in enumerate(self.coefficients)
        )

    def elevate(self, degree: int) -> "ErasurePolynomial":
        """Same polynomial written in a higher-degree pattern basis."""
        n = self.degree
        if degree < n:
            raise ValueError(f"cannot lower degree {n} to {degree}")
        d = degree - n
        out: List[Any] = [0] * (degree + 1)
        for a, c in enumerate(self.coefficients):
            for j in range(d + 1):
                out[a + j] = out[a + j] + c * comb(d, j)
        return ErasurePolynomial.from_coefficients(out)

    def _aligned(self, other: "ErasurePolynomial"):
        n = max(self.degree, other.degree)
        return self.elevate(n).coefficients, other.elevate(n).coefficients

    def __add__(self, other: "ErasurePolynomial") -> "ErasurePolynomial":
        a, b = self._aligned(other)
        return ErasurePolynomial.from_coefficients([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "ErasurePolynomial") -> "ErasurePolynomial":
        a, b = self._aligned(other)
        return ErasurePolynomial.from_coefficients([x - y for x, y in zip(a, b)])

    def scale(self, factor: Scalar) -> "ErasurePolynomial":
        return ErasurePolynomial.from_coefficients([c * factor for c in self.coefficients])

    def __mul__(self, other: "ErasurePolynomial") -> "ErasurePolynomial":
        out: List[Any] = [0] * (self.degree + other.degree + 1)
        for a, x in enumerate(self.coefficients):
            for b, y in enumerate(other.coefficients):
                out[a + b] = out[a + b] + x * y
        return ErasurePolynomial.from_coefficients(out)

    def nonnegative_certificate(self) -> bool:
        """All pattern-basis coefficients >= 0 (sufficient for >= 0 on [0, 1])."""
        return all(c >= 0 for c in self.coefficients)

    def to_json(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "basis": "t^a (1-t)^(n-a)",
            "coefficients": [format_number(c) for c in self.coefficients],
        }


def _normalize(value: Any) -> Number:
    if isinstance(value, Fraction):
        return value
    if is_exact_scalar(value):
        return Fraction(value)
    if isinstance(value, np.integer):
        return Fraction(int(value))
    return float(value)


def pattern_sum(values_by_size: Dict[int, Scalar], degree: int) -> ErasurePolynomial:
    """Polynomial with coefficient values_by_size[a] on t^a (1 - t)^(degree - a)."""
    return ErasurePolynomial.from_coefficients(
        [values_by_size.get(a, 0) for a in range(degree + 1)]
    )
