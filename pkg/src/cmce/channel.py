"""Sliding-window error sequences.

The channel contract: every window of 2*mu + 1 consecutive error
coefficients carries total Hamming weight at most t.  That is exactly the
condition under which the descrambled stream stays within the inner code's
error capability at every time step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import ParameterError


@dataclass
class PolyVector:
    """A finite coefficient stream of width-w vectors, starting at time 0."""

    width: int
    coeffs: np.ndarray
    start: int = 0

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.int32)
        if self.coeffs.ndim != 2 or self.coeffs.shape[1] != self.width:
            raise ParameterError(
                f"coefficients must have shape (*, {self.width}), got {self.coeffs.shape}")

    @classmethod
    def zero(cls, width: int, num_coeffs: int) -> "PolyVector":
        return cls(width, np.zeros((num_coeffs, width), dtype=np.int32))

    @property
    def num_coeffs(self) -> int:
        return self.coeffs.shape[0]

    @property
    def degree(self) -> int:
        return self.start + self.num_coeffs - 1

    def weight(self) -> int:
        return int((self.coeffs != 0).sum())

    def coefficient_weights(self) -> np.ndarray:
        return (self.coeffs != 0).sum(axis=1).astype(np.int64)

    def __eq__(self, other):
        return (isinstance(other, PolyVector) and self.width == other.width
                and self.start == other.start and np.array_equal(self.coeffs, other.coeffs))

    def __repr__(self):
        return f"PolyVector(width={self.width}, coeffs={self.num_coeffs}, start={self.start})"


def sample_error(field, L: int, n: int, t: int, mu: int, rng: np.random.Generator,
                 load: float = 1.0) -> PolyVector:
    """Random error stream e_0..e_L satisfying the window condition.

    Greedy construction: at step j the remaining budget is t minus the
    weight already spent in the previous 2*mu coefficients; the step weight
    is drawn uniformly from [0, floor(load * budget)] and placed at distinct
    uniform positions with uniform nonzero values.  Every admissible pattern
    has nonzero probability at load = 1, though the distribution is not
    uniform over the constraint set.
    """
    if t < 0 or mu < 0 or L < 0:
        raise ParameterError("need t >= 0, mu >= 0, L >= 0")
    if not 0.0 <= load <= 1.0:
        raise ParameterError(f"load must lie in [0, 1], got {load}")
    coeffs = np.zeros((L + 1, n), dtype=np.int32)
    if t == 0:
        return PolyVector(n, coeffs)
    weights = np.zeros(L + 1, dtype=np.int64)
    window = 2 * mu
    for j in range(L + 1):
        spent = int(weights[max(0, j - window):j].sum())
        cap = int(load * (t - spent))
        if cap <= 0:
            continue
        w = int(rng.integers(cap + 1))
        if w == 0:
            continue
        positions = rng.choice(n, size=min(w, n), replace=False)
        values = 1 + rng.integers(field.q - 1, size=positions.size)
        coeffs[j, positions] = values.astype(np.int32)
        weights[j] = positions.size
    return PolyVector(n, coeffs)


def validate_error(e: PolyVector, t: int, mu: int) -> Optional[int]:
    """None when every window of width 2*mu+1 has weight <= t, else the
    first violating window start index.  Suffix windows that extend past the
    end of the stream are checked over the coefficients that exist."""
    w = e.coefficient_weights()
    width = 2 * mu + 1
    sums = np.convolve(w, np.ones(width, dtype=np.int64))[width - 1:]
    bad = np.nonzero(sums > t)[0]
    return int(bad[0]) if bad.size else None
