"""Laurent polynomial matrices over GF(q) and the masking transformations.

The masking transformation T(D, 1/D) = sum_{i=-mu}^{mu} T_i D^i used to hide
the inner block code must satisfy three conditions: (a) constant nonzero
determinant, (b) the nonzero-column index sets of the T_i partition
{0..n-1}, and (c) at most one nonzero entry per row of each T_i.  Such
matrices factor exactly as T = Pi * Delta * Gamma with Gamma a permutation,
Delta a diagonal of monomials D^i (d_i entries of exponent i, balanced so
that sum_i i*d_i = 0), and Pi an invertible block matrix over the Delta
block structure.  This module provides the matrix algebra plus sampling,
validation, inversion and the counting formulas for the key-space analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .exceptions import ParameterError
from .field import Field

ENUMERATION_LIMIT = 10**6

_profile_cache: dict = {}


class LaurentMatrix:
    """Matrix of Laurent polynomials, stored as stacked coefficient matrices.

    ``coeffs[i]`` is the matrix of D^(low + i).  The representation is kept
    canonical: leading/trailing all-zero coefficient matrices are trimmed
    (the zero matrix is stored as a single zero coefficient at degree 0).
    """

    __slots__ = ("field", "low", "coeffs")

    def __init__(self, field: Field, low: int, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=np.int32)
        if coeffs.ndim != 3:
            raise ParameterError(f"coefficient stack must be 3-d, got shape {coeffs.shape}")
        nz = [i for i in range(coeffs.shape[0]) if coeffs[i].any()]
        if not nz:
            low, coeffs = 0, np.zeros((1,) + coeffs.shape[1:], dtype=np.int32)
        else:
            first, last = nz[0], nz[-1]
            low += first
            coeffs = np.ascontiguousarray(coeffs[first:last + 1])
        self.field = field
        self.low = low
        self.coeffs = coeffs

    @classmethod
    def constant(cls, field: Field, mat: np.ndarray) -> "LaurentMatrix":
        return cls(field, 0, np.asarray(mat, dtype=np.int32)[None, :, :])

    @classmethod
    def identity(cls, field: Field, n: int) -> "LaurentMatrix":
        return cls.constant(field, np.eye(n, dtype=np.int32))

    @classmethod
    def zero(cls, field: Field, rows: int, cols: int) -> "LaurentMatrix":
        return cls(field, 0, np.zeros((1, rows, cols), dtype=np.int32))

    @property
    def rows(self) -> int:
        return self.coeffs.shape[1]

    @property
    def cols(self) -> int:
        return self.coeffs.shape[2]

    @property
    def high(self) -> int:
        return self.low + self.coeffs.shape[0] - 1

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def coeff(self, exponent: int) -> np.ndarray:
        """Coefficient matrix of D^exponent (zeros outside the stored range)."""
        if self.low <= exponent <= self.high:
            return self.coeffs[exponent - self.low]
        return np.zeros((self.rows, self.cols), dtype=np.int32)

    def mul(self, other: "LaurentMatrix") -> "LaurentMatrix":
        """Laurent product: coefficient s of the result is sum_i A_i B_{s-i}."""
        if self.field != other.field:
            raise ParameterError("operands live in different fields")
        if self.cols != other.rows:
            raise ParameterError(f"dimension mismatch: {self.cols} vs {other.rows}")
        F = self.field
        la, lb = self.coeffs.shape[0], other.coeffs.shape[0]
        out = np.zeros((la + lb - 1, self.rows, other.cols), dtype=np.int32)
        blogs = [F.prepare_log(other.coeffs[j]) for j in range(lb)]
        for i in range(la):
            ai = self.coeffs[i]
            if not ai.any():
                continue
            for j in range(lb):
                term = F.matmul(ai, None, b_log=blogs[j])
                out[i + j] = F.add_arr(out[i + j], term)
        return LaurentMatrix(F, self.low + other.low, out)

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return self.mul(other)

    def eval_at(self, x: int) -> np.ndarray:
        """Evaluate at a nonzero scalar: sum_i M_i x^i (negative powers use 1/x)."""
        F = self.field
        if x == 0 and self.low < 0:
            raise ZeroDivisionError("cannot evaluate negative powers at 0")
        out = np.zeros((self.rows, self.cols), dtype=np.int32)
        for i in range(self.coeffs.shape[0]):
            scale = F.pow(x, self.low + i)
            out = F.add_arr(out, F.mul_arr(self.coeffs[i], np.int32(scale)))
        return out

    def __eq__(self, other):
        return (isinstance(other, LaurentMatrix) and self.field == other.field
                and self.low == other.low and np.array_equal(self.coeffs, other.coeffs))

    def __repr__(self):
        return (f"LaurentMatrix({self.rows}x{self.cols} over GF({self.field.q}), "
                f"degrees [{self.low}, {self.high}])")


def stream_times_matrix(field: Field, stream: np.ndarray, mat: LaurentMatrix) -> tuple[np.ndarray, int]:
    """Coefficients of v(D) * M(D) for a coefficient stream v (shape (L+1, w)).

    Returns (out, low): out[s] is the coefficient of D^(low + s); the output
    covers the full range [mat.low, L + mat.high] without trimming.
    """
    stream = np.asarray(stream, dtype=np.int32)
    steps, width = stream.shape
    if width != mat.rows:
        raise ParameterError(f"stream width {width} != matrix rows {mat.rows}")
    taps = mat.coeffs.shape[0]
    out = np.zeros((steps + taps - 1, mat.cols), dtype=np.int32)
    for j in range(taps):
        tap = mat.coeffs[j]
        if not tap.any():
            continue
        term = field.matmul(stream, tap)
        out[j:j + steps] = field.add_arr(out[j:j + steps], term)
    return out, mat.low


# -- Delta profiles ------------------------------------------------------------


@dataclass(frozen=True)
class DeltaProfile:
    """Multiplicities d_i of the diagonal exponents i in [-mu, mu].

    The balance condition sum_i i * d_i = 0 is exactly what keeps the
    determinant of the composed transformation constant.
    """

    mu: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if self.mu < 0:
            raise ParameterError("window radius must be >= 0")
        if len(self.counts) != 2 * self.mu + 1:
            raise ParameterError(f"profile needs {2 * self.mu + 1} counts, got {len(self.counts)}")
        if any(c < 0 for c in self.counts):
            raise ParameterError("multiplicities must be nonnegative")
        if self.weighted_sum() != 0:
            raise ParameterError("profile violates the balance condition")

    @property
    def n(self) -> int:
        return sum(self.counts)

    def count(self, exponent: int) -> int:
        return self.counts[exponent + self.mu]

    def weighted_sum(self) -> int:
        return sum(i * c for i, c in zip(range(-self.mu, self.mu + 1), self.counts))

    def is_identity(self) -> bool:
        return self.count(0) == self.n

    def exponents(self) -> np.ndarray:
        """Per-position diagonal exponent, increasing along the diagonal."""
        return np.repeat(np.arange(-self.mu, self.mu + 1), self.counts)

    def block_bounds(self) -> list[tuple[int, int]]:
        """Half-open position ranges of the 2*mu+1 diagonal blocks."""
        bounds = []
        start = 0
        for c in self.counts:
            bounds.append((start, start + c))
            start += c
        return bounds


@lru_cache(maxsize=None)
def partition_count(r: int, i: int, mu: int) -> int:
    """Number of partitions of r into exactly i parts, each of size <= mu.

    Computed by the recurrence
    p(r,i,mu) = p(r-1,i-1,mu) + p(r-i,i,mu) - p(r-i-mu,i-1,mu)
    (split on whether a part equals 1; the correction removes partitions
    whose shrunken largest part would exceed mu).
    """
    if r < 0 or i < 0 or mu < 0:
        return 0
    if i == 0:
        return 1 if r == 0 else 0
    if r == 0:
        return 0
    return (partition_count(r - 1, i - 1, mu)
            + partition_count(r - i, i, mu)
            - partition_count(r - i - mu, i - 1, mu))


def count_delta(n: int, mu: int) -> int:
    """Number of admissible non-identity profiles for an n x n transformation.

    sum_{r=1}^{mu*floor(n/2)} sum_{i=1}^{min(r,n)} p(r,i,mu)
        * sum_{j=1}^{min(r,n-i)} p(r,j,mu)
    where r is the common weighted sum of the negative and positive sides.
    """
    if n < 1 or mu < 0:
        raise ParameterError("need n >= 1 and mu >= 0")
    total = 0
    for r in range(1, mu * (n // 2) + 1):
        for i in range(1, min(r, n) + 1):
            left = partition_count(r, i, mu)
            if left == 0:
                continue
            right = sum(partition_count(r, j, mu) for j in range(1, min(r, n - i) + 1))
            total += left * right
    return total


def _side_tuples(n: int, mu: int) -> dict[int, list[tuple[int, ...]]]:
    """All (c_1..c_mu) with sum <= n, grouped by weighted sum c_1 + 2c_2 + ..."""
    by_weight: dict[int, list[tuple[int, ...]]] = {}

    def rec(idx: int, remaining: int, weight: int, acc: list[int]):
        if idx == mu:
            by_weight.setdefault(weight, []).append(tuple(acc))
            return
        part = idx + 1
        for c in range(remaining + 1):
            acc.append(c)
            rec(idx + 1, remaining - c, weight + part * c, acc)
            acc.pop()

    rec(0, n, 0, [])
    return by_weight


def enumerate_delta_profiles(n: int, mu: int, include_identity: bool = False) -> list[DeltaProfile]:
    """Materialize every admissible profile (cached per (n, mu))."""
    key = (n, mu, include_identity)
    cached = _profile_cache.get(key)
    if cached is not None:
        return cached
    if mu == 0:
        profiles = [DeltaProfile(0, (n,))] if include_identity else []
    else:
        sides = _side_tuples(n, mu)
        profiles = []
        for r, negs in sorted(sides.items()):
            if r == 0:
                continue
            for neg in negs:
                wn = sum(neg)
                for pos in sides.get(r, []):
                    wp = sum(pos)
                    if wn + wp <= n:
                        counts = tuple(reversed(neg)) + (n - wn - wp,) + pos
                        profiles.append(DeltaProfile(mu, counts))
        if include_identity:
            profiles.append(DeltaProfile(mu, (0,) * mu + (n,) + (0,) * mu))
    _profile_cache[key] = profiles
    return profiles


def sample_delta(n: int, mu: int, rng: np.random.Generator) -> DeltaProfile:
    """Uniform over admissible profiles (identity only when mu = 0).

    When the profile count fits the enumeration limit the set is enumerated
    once and indexed; otherwise uniform compositions of n are rejection
    sampled against the balance condition, which is still exactly uniform.
    """
    if mu == 0:
        return DeltaProfile(0, (n,))
    if n < 2:
        raise ParameterError("no non-identity profile exists for n < 2")
    if count_delta(n, mu) == 0:
        raise ParameterError(f"no non-identity profile exists for n={n}, mu={mu}")
    if count_delta(n, mu) <= ENUMERATION_LIMIT:
        profiles = enumerate_delta_profiles(n, mu)
        return profiles[int(rng.integers(len(profiles)))]
    width = 2 * mu + 1
    for _ in range(10**7):
        cuts = np.sort(rng.choice(n + width - 1, size=width - 1, replace=False))
        parts = np.diff(np.concatenate([[-1], cuts, [n + width - 1]])) - 1
        counts = tuple(int(c) for c in parts)
        if counts[mu] == n:
            continue
        weighted = sum(i * c for i, c in zip(range(-mu, mu + 1), counts))
        if weighted == 0:
            return DeltaProfile(mu, counts)
    raise ParameterError("rejection sampling failed to find an admissible profile")


# -- Pi matrices ----------------------------------------------------------------


@dataclass(frozen=True)
class PiMatrix:
    """Invertible block matrix over a profile's block structure.

    Identity diagonal blocks; below-diagonal blocks zero; each row of each
    above-diagonal block has at most one nonzero entry.  Unit block
    triangularity makes the determinant 1 without any rejection step.
    """

    field: Field
    profile: DeltaProfile
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=np.int32))
        violations = self.structural_violations()
        if violations:
            raise ParameterError("not a valid block matrix: " + "; ".join(violations))

    def structural_violations(self) -> list[str]:
        n = self.profile.n
        m = self.matrix
        out = []
        if m.shape != (n, n):
            return [f"shape {m.shape} != ({n}, {n})"]
        bounds = self.profile.block_bounds()
        for bi, (r0, r1) in enumerate(bounds):
            for bj, (c0, c1) in enumerate(bounds):
                block = m[r0:r1, c0:c1]
                if bi == bj:
                    if not np.array_equal(block, np.eye(r1 - r0, dtype=np.int32)):
                        out.append(f"diagonal block {bi} is not the identity")
                elif bi > bj:
                    if block.any():
                        out.append(f"below-diagonal block ({bi},{bj}) is nonzero")
                else:
                    if np.any((block != 0).sum(axis=1) > 1):
                        out.append(f"block ({bi},{bj}) has a row with multiple nonzeros")
        return out

    def inverse(self) -> np.ndarray:
        from .linalg import matrix_inverse
        return matrix_inverse(self.field, self.matrix)


def sample_pi(field: Field, profile: DeltaProfile, rng: np.random.Generator,
              density: float = 0.5) -> PiMatrix:
    """Random admissible block matrix; each above-diagonal row is left zero
    with probability 1 - density, otherwise gets one uniform nonzero entry
    at a uniform column of the target block."""
    if not 0.0 <= density <= 1.0:
        raise ParameterError(f"density must lie in [0, 1], got {density}")
    n = profile.n
    m = np.eye(n, dtype=np.int32)
    bounds = profile.block_bounds()
    nblocks = len(bounds)
    for bi in range(nblocks):
        r0, r1 = bounds[bi]
        if r0 == r1:
            continue
        for bj in range(bi + 1, nblocks):
            c0, c1 = bounds[bj]
            if c0 == c1:
                continue
            for r in range(r0, r1):
                if rng.random() < density:
                    col = c0 + int(rng.integers(c1 - c0))
                    m[r, col] = 1 + int(rng.integers(field.q - 1))
    return PiMatrix(field, profile, m)


def count_U(rows: int, cols: int, q: int) -> tuple[int, int]:
    """Counts of rows x cols blocks with at most one nonzero entry per row.

    Returns (paper_literal, derived): the literal published formula
    (q-1) * (cols+1)**rows and the directly enumerated count
    ((q-1) * cols + 1)**rows.  They disagree in general; reports use the
    derived value and expose the literal one for comparison.
    """
    if rows < 0 or cols < 0:
        raise ParameterError("rows and cols must be nonnegative")
    paper_literal = (q - 1) * (cols + 1) ** rows
    derived = ((q - 1) * cols + 1) ** rows
    return paper_literal, derived


def sample_permutation(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.permutation(n).astype(np.int64)


def validate_permutation(perm: np.ndarray, n: int) -> None:
    perm = np.asarray(perm)
    if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
        raise ParameterError("not a permutation of 0..n-1")


# -- composition, validation, inversion -----------------------------------------


def compose_T(pi: PiMatrix, profile: DeltaProfile, gamma: np.ndarray) -> LaurentMatrix:
    """T = Pi * Delta * Gamma; column gamma[c] of T carries column c of Pi at
    the monomial D^(exponent of diagonal position c)."""
    if pi.profile != profile:
        raise ParameterError("Pi was sampled for a different profile")
    n = profile.n
    validate_permutation(gamma, n)
    field = pi.field
    exps = profile.exponents()
    coeffs = np.zeros((2 * profile.mu + 1, n, n), dtype=np.int32)
    for idx, i in enumerate(range(-profile.mu, profile.mu + 1)):
        cols = np.nonzero(exps == i)[0]
        if cols.size:
            coeffs[idx][:, gamma[cols]] = pi.matrix[:, cols]
    return LaurentMatrix(field, -profile.mu, coeffs)


def invert_T(pi: PiMatrix, profile: DeltaProfile, gamma: np.ndarray) -> LaurentMatrix:
    """P = Gamma^T * Delta^{-1} * Pi^{-1}; row gamma[r] of P carries row r of
    Pi^{-1} at the monomial D^(-exponent of diagonal position r)."""
    if pi.profile != profile:
        raise ParameterError("Pi was sampled for a different profile")
    n = profile.n
    validate_permutation(gamma, n)
    field = pi.field
    pinv = pi.inverse()
    exps = profile.exponents()
    coeffs = np.zeros((2 * profile.mu + 1, n, n), dtype=np.int32)
    for idx, i in enumerate(range(-profile.mu, profile.mu + 1)):
        rows = np.nonzero(exps == -i)[0]
        if rows.size:
            coeffs[idx][gamma[rows], :] = pinv[rows, :]
    return LaurentMatrix(field, -profile.mu, coeffs)


@dataclass(frozen=True)
class Violation:
    condition: str
    index: int
    detail: str

    def __str__(self):
        return f"[{self.condition}] index {self.index}: {self.detail}"


def validate_T(t: LaurentMatrix) -> list[Violation]:
    """Check the three admissibility conditions; empty list means valid.

    (row-multiplicity) every row of every coefficient has at most one
    nonzero entry; (column-partition) the nonzero-column sets of the
    coefficients are disjoint and cover all columns; (balance) the column
    exponents sum to zero and (invertibility) the recovered constant factor
    is invertible -- together equivalent to a constant nonzero determinant.
    """
    from .linalg import rank as gf_rank

    if t.rows != t.cols:
        raise ParameterError("validation applies to square matrices only")
    n = t.rows
    out: list[Violation] = []
    ncoeffs = t.coeffs.shape[0]

    for i in range(ncoeffs):
        bad_rows = np.nonzero((t.coeffs[i] != 0).sum(axis=1) > 1)[0]
        for r in bad_rows:
            out.append(Violation("row-multiplicity", int(r),
                                 f"row has multiple nonzeros in coefficient D^{t.low + i}"))

    col_class = np.full(n, -10**9, dtype=np.int64)
    for i in range(ncoeffs):
        nzcols = np.nonzero(t.coeffs[i].any(axis=0))[0]
        for c in nzcols:
            if col_class[c] != -10**9:
                out.append(Violation("column-partition", int(c),
                                     "column is nonzero in more than one coefficient"))
            col_class[c] = t.low + i
    uncovered = np.nonzero(col_class == -10**9)[0]
    for c in uncovered:
        out.append(Violation("column-partition", int(c), "column is zero in every coefficient"))

    if uncovered.size == 0 and not any(v.condition == "column-partition" for v in out):
        total = int(col_class.sum())
        if total != 0:
            out.append(Violation("balance", total,
                                 "column exponents sum to a nonzero value; det is not constant"))
        pi_rec = np.zeros((n, n), dtype=np.int32)
        for c in range(n):
            pi_rec[:, c] = t.coeff(int(col_class[c]))[:, c]
        if gf_rank(t.field, pi_rec) != n:
            out.append(Violation("invertibility", -1,
                                 "recovered constant factor is singular"))
    return out
