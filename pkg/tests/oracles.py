"""Independent oracles for the test suite.

Everything here is deliberately written from scratch -- schoolbook field
arithmetic on coefficient tuples, brute-force enumerations, a second
elimination routine, Monte-Carlo estimators -- so that the package is
checked against implementations that share none of its code paths.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


class PolyField:
    """Schoolbook GF(p^m): elements are coefficient tuples, no tables."""

    def __init__(self, p: int, m: int, reduction_poly):
        self.p = p
        self.m = m
        self.q = p**m
        self.red = tuple(reduction_poly)

    def to_tuple(self, value: int) -> tuple:
        out = []
        for _ in range(self.m):
            out.append(value % self.p)
            value //= self.p
        return tuple(out)

    def to_int(self, coeffs) -> int:
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.p + c % self.p
        return v

    def add(self, a: int, b: int) -> int:
        return self.to_int((x + y) % self.p
                           for x, y in zip(self.to_tuple(a), self.to_tuple(b)))

    def mul(self, a: int, b: int) -> int:
        ta, tb = self.to_tuple(a), self.to_tuple(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(ta):
            for j, y in enumerate(tb):
                prod[i + j] = (prod[i + j] + x * y) % self.p
        # long division by the monic reduction polynomial
        for top in range(len(prod) - 1, self.m - 1, -1):
            lead = prod[top]
            if lead:
                for i in range(self.m + 1):
                    prod[top - self.m + i] = (prod[top - self.m + i]
                                              - lead * self.red[i]) % self.p
        return self.to_int(prod[:self.m])

    def inv(self, a: int) -> int:
        for b in range(1, self.q):
            if self.mul(a, b) == 1:
                return b
        raise ZeroDivisionError(a)


def brute_force_partitions(r: int, i: int, mu: int) -> list[tuple[int, ...]]:
    """All partitions of r into exactly i parts with every part in [1, mu]."""
    out = []

    def rec(remaining, parts_left, max_part, acc):
        if parts_left == 0:
            if remaining == 0:
                out.append(tuple(acc))
            return
        for part in range(min(remaining, max_part), 0, -1):
            if part * parts_left >= remaining:
                acc.append(part)
                rec(remaining - part, parts_left - 1, part, acc)
                acc.pop()

    rec(r, i, mu, [])
    return out


def brute_force_delta_profiles(n: int, mu: int) -> list[tuple[int, ...]]:
    """All non-identity multiplicity tuples (d_-mu..d_mu) with sum n and
    balanced weighted sums, by direct enumeration."""
    width = 2 * mu + 1
    exps = list(range(-mu, mu + 1))
    out = []

    def rec(idx, remaining, acc):
        if idx == width - 1:
            acc.append(remaining)
            counts = tuple(acc)
            if sum(e * c for e, c in zip(exps, counts)) == 0 and counts[mu] != n:
                out.append(counts)
            acc.pop()
            return
        for c in range(remaining + 1):
            acc.append(c)
            rec(idx + 1, remaining - c, acc)
            acc.pop()

    rec(0, n, [])
    return out


def max_window_weight(num_coeffs: int, mu: int, t: int) -> int:
    """Exact maximum of sum(w_0..w_{num_coeffs-1}) subject to every
    window of 2*mu+1 consecutive weights summing to <= t, by dynamic
    programming over the trailing-window state."""
    window = 2 * mu
    best = {(0,) * window if window else (): 0}
    for _ in range(num_coeffs):
        nxt = {}
        for state, total in best.items():
            used = sum(state)
            for w in range(t - used + 1):
                ns = (state[1:] + (w,)) if window else ()
                cand = total + w
                if nxt.get(ns, -1) < cand:
                    nxt[ns] = cand
        best = nxt
    return max(best.values())


def rank_oracle(field, mat) -> int:
    """Second-implementation row reduction using only scalar field ops."""
    rows = [list(int(x) for x in row) for row in np.asarray(mat)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = field.inv(rows[rank][col])
        rows[rank] = [field.mul(inv, v) for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [field.sub(a, field.mul(f, b))
                           for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def eval_message_poly(field, coeffs, x: int) -> int:
    """Horner evaluation of a message polynomial at a point."""
    acc = 0
    for c in reversed(list(coeffs)):
        acc = field.add(field.mul(acc, x), int(c))
    return acc


def mc_information_set_success(N: int, K: int, t: int, trials: int,
                               rng: np.random.Generator) -> float:
    """Monte-Carlo estimate of the probability that a uniform size-K
    information set avoids a fixed weight-t error support."""
    hits = 0
    error_support = set(range(t))       # position symmetry: any fixed support
    for _ in range(trials):
        info = rng.choice(N, size=K, replace=False)
        if not error_support.intersection(info.tolist()):
            hits += 1
    return hits / trials


def enumerate_scramblers(q: int, k: int, span: int, field) -> int:
    """Count tuples (S_mu..S_nu) of k x k matrices with S_mu invertible,
    span = nu - mu + 1 coefficients, by exhaustive enumeration."""

    def all_matrices():
        for flat in itertools.product(range(q), repeat=k * k):
            yield [list(flat[i * k:(i + 1) * k]) for i in range(k)]

    def invertible(m):
        return rank_oracle(field, np.array(m)) == k

    n_inv = sum(1 for m in all_matrices() if invertible(m))
    return n_inv * (q ** (k * k)) ** (span - 1)


def exact_hypergeometric(N: int, K: int, t: int) -> Fraction:
    """C(N - K, t) / C(N, t) -- probability a weight-t support avoids K slots."""
    import math
    if t > N - K:
        return Fraction(0)
    return Fraction(math.comb(N - K, t), math.comb(N, t))
