"""Row reduction and related linear algebra over F_q (rank representation)."""

from typing import List, Tuple

import numpy as np

from .exceptions import SingularMatrix
from .gf import FieldSpec


def field_sum(spec: FieldSpec, arr: np.ndarray, axis: int) -> np.ndarray:
    """Sum field elements along an axis.

    Addition of ranks is addition of polynomial coefficient vectors mod p,
    so elements are lifted to their coefficient digits, summed, and mapped back.
    """
    arr = np.asarray(arr, dtype=np.int64)
    digits = spec.char_vector[arr]  # (..., e)
    total = digits.sum(axis=axis) % spec.p
    powers = spec.p ** np.arange(spec.e, dtype=np.int64)
    codes = (total * powers).sum(axis=-1)
    return spec.rank_of_code[codes]


def matmul(spec: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=np.int64))
    b = np.atleast_2d(np.asarray(b, dtype=np.int64))
    prods = spec.mul_table[a[:, :, None], b[None, :, :]]
    return field_sum(spec, prods, axis=1)


def _axpy(spec: FieldSpec, y: np.ndarray, a: int, x: np.ndarray) -> np.ndarray:
    """y - a x."""
    return spec.add_table[y, spec.neg_table[spec.mul_table[a][x]]]


def rref(spec: FieldSpec, matrix: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form and pivot columns."""
    m = np.array(matrix, dtype=np.int64, copy=True)
    if m.ndim != 2:
        m = np.atleast_2d(m)
    rows, cols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = spec.mul_table[spec.inv_table[m[r, c]]][m[r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = _axpy(spec, m[i], int(m[i, c]), m[r])
        pivots.append(c)
        r += 1
    return m, pivots


def rank(spec: FieldSpec, matrix: np.ndarray) -> int:
    if np.asarray(matrix).size == 0:
        return 0
    return len(rref(spec, matrix)[1])


def row_basis(spec: FieldSpec, matrix: np.ndarray) -> np.ndarray:
    reduced, pivots = rref(spec, matrix)
    return reduced[: len(pivots)]


def row_space_equal(spec: FieldSpec, a: np.ndarray, b: np.ndarray) -> bool:
    """Equality of row spaces via the (unique) reduced basis."""
    ra, rb = row_basis(spec, a), row_basis(spec, b)
    return ra.shape == rb.shape and bool(np.array_equal(ra, rb))


def in_row_space(spec: FieldSpec, matrix: np.ndarray, v: np.ndarray) -> bool:
    stacked = np.vstack([np.atleast_2d(matrix), np.atleast_2d(v)])
    return rank(spec, stacked) == rank(spec, matrix)


def inverse(spec: FieldSpec, matrix: np.ndarray) -> np.ndarray:
    a = np.asarray(matrix, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise SingularMatrix("matrix is not square")
    eye = np.zeros((n, n), dtype=np.int64)
    eye[np.arange(n), np.arange(n)] = 1
    reduced, pivots = rref(spec, np.hstack([a, eye]))
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular over F_q")
    return reduced[:, n:]


def is_invertible(spec: FieldSpec, matrix: np.ndarray) -> bool:
    a = np.asarray(matrix)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and rank(spec, a) == a.shape[0]


def span(spec: FieldSpec, generator: np.ndarray) -> np.ndarray:
    """All q^k combinations of the rows, as uint8 rows.

    Row n is the combination with coefficient vector tau_k^{-1}(n), so the
    first generator row carries the least significant digit.
    """
    g = np.atleast_2d(np.asarray(generator, dtype=np.int64))
    words = np.zeros((1, g.shape[1]), dtype=np.uint8)
    for row in g:
        scaled = spec.mul_table[:, row]  # (q, N): a * row for every a
        combined = spec.add_table[scaled[:, None, :], words[None, :, :]]
        words = combined.reshape(-1, g.shape[1]).astype(np.uint8)
    return words
