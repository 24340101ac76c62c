"""Dense linear algebra over a Field: elimination, rank, inversion, sampling."""

from __future__ import annotations

import numpy as np

from .exceptions import ParameterError
from .field import Field


def rank(field: Field, a: np.ndarray) -> int:
    """Row rank of a matrix via Gaussian elimination."""
    m = np.array(a, dtype=np.int32)
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivots = np.nonzero(m[r:, c])[0]
        if pivots.size == 0:
            continue
        p = r + int(pivots[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        pivrow = field.mul_arr(m[r], np.int32(field.inv(int(m[r, c]))))
        m[r] = pivrow
        below = m[r + 1:]
        if below.size:
            factors = below[:, c]
            m[r + 1:] = field.sub_arr(below, field.mul_arr(factors[:, None], pivrow[None, :]))
        r += 1
    return r


def matrix_inverse(field: Field, a: np.ndarray) -> np.ndarray:
    """Inverse of a square matrix; raises ParameterError when singular."""
    a = np.asarray(a, dtype=np.int32)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ParameterError(f"matrix is not square: {a.shape}")
    m = np.hstack([a, np.eye(n, dtype=np.int32)])
    for c in range(n):
        pivots = np.nonzero(m[c:, c])[0]
        if pivots.size == 0:
            raise ParameterError("matrix is singular")
        p = c + int(pivots[0])
        if p != c:
            m[[c, p]] = m[[p, c]]
        m[c] = field.mul_arr(m[c], np.int32(field.inv(int(m[c, c]))))
        others = np.nonzero(m[:, c])[0]
        others = others[others != c]
        if others.size:
            m[others] = field.sub_arr(m[others],
                                      field.mul_arr(m[others, c][:, None], m[c][None, :]))
    return np.ascontiguousarray(m[:, n:])


def is_invertible(field: Field, a: np.ndarray) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and rank(field, a) == a.shape[0]


def random_matrix(field: Field, rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.integers(0, field.q, size=(rows, cols), dtype=np.int32)


def random_invertible_matrix(field: Field, rng: np.random.Generator, size: int,
                             max_tries: int = 10000) -> np.ndarray:
    """Uniform invertible matrix by rejection from uniform draws."""
    for _ in range(max_tries):
        m = random_matrix(field, rng, size, size)
        if is_invertible(field, m):
            return m
    raise ParameterError(f"no invertible {size}x{size} matrix found in {max_tries} draws")
