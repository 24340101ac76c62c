"""Key-space counting and information-set-decoding cost estimates.

Everything is exact: big-integer counts and Fraction probabilities, with
log2 taken only for presentation.  Where the published counting formulas
disagree with direct enumeration (the scrambler count and the block-matrix
count), both values are computed; reports default to the enumeration-backed
one and flag the discrepancy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

from . import linalg
from .exceptions import ParameterError
from .keygen import PublicKey, SchemeParams, truncated_generator
from .laurent import count_U, count_delta, enumerate_delta_profiles


def _comb(n: int, r: int) -> int:
    """Binomial with the usual out-of-range convention C(n, r) = 0."""
    if r < 0 or n < 0 or r > n:
        return 0
    return math.comb(n, r)


def log2_fraction(x: Union[int, Fraction]) -> float:
    x = Fraction(x)
    if x <= 0:
        return float("-inf")
    return math.log2(x.numerator) - math.log2(x.denominator)


# -- key-space counting ----------------------------------------------------------


class SKeyCount(NamedTuple):
    paper_literal: int
    proof_derived: int


def count_S_keys(q: int, k: int, mu: int, nu: int) -> SKeyCount:
    """Number of admissible scramblers S(D) = sum_{i=mu}^{nu} S_i D^i.

    S_mu ranges over the invertible k x k matrices and each of the nu - mu
    higher coefficients is free, giving q^(k^2 (nu-mu)) * prod_j (q^k - q^j).
    The published count has the factor (nu - mu) * q^(k^2) instead of the
    exponentiated form; both are returned (literal first).
    """
    if nu < mu:
        raise ParameterError("need nu >= mu")
    gl = 1
    for j in range(k):
        gl *= q**k - q**j
    free = nu - mu
    paper_literal = free * q**(k * k) * gl
    proof_derived = q**(k * k * free) * gl
    return SKeyCount(paper_literal, proof_derived)


def count_pi_total(n: int, mu: int, q: int, use_derived: bool = True) -> tuple[int, int]:
    """(number of admissible profiles, total (profile, Pi) pairs).

    Pi choices per profile multiply the per-block counts over the
    above-diagonal blocks; below-diagonal blocks are zero by construction.
    """
    profiles = enumerate_delta_profiles(n, mu, include_identity=(mu == 0))
    if mu == 0:
        return 1, 1
    total = 0
    for prof in profiles:
        pairs = 1
        counts = prof.counts
        nb = len(counts)
        for bi in range(nb):
            for bj in range(bi + 1, nb):
                literal, derived = count_U(counts[bi], counts[bj], q)
                pairs *= derived if use_derived else literal
        total += pairs
    return len(profiles), total


@dataclass(frozen=True)
class KeySpaceReport:
    """log2 sizes of the secret-key factors; total is the sum of the parts."""

    params_label: str
    s_count: int
    s_count_paper_literal: int
    delta_count: int
    pi_mean: Fraction                # mean Pi choices per admissible profile
    pi_total: int
    gamma_count: int
    u_count_discrepancy: bool

    @property
    def s_log2(self) -> float:
        return log2_fraction(self.s_count)

    @property
    def delta_log2(self) -> float:
        return log2_fraction(self.delta_count)

    @property
    def pi_log2(self) -> float:
        return log2_fraction(self.pi_mean)

    @property
    def gamma_log2(self) -> float:
        return log2_fraction(self.gamma_count)

    @property
    def total_log2(self) -> float:
        return self.s_log2 + self.delta_log2 + self.pi_log2 + self.gamma_log2

    def as_pairs(self) -> list[tuple[str, str]]:
        return [
            ("keyspace.s_count_log2", f"{self.s_log2:.6f}"),
            ("keyspace.s_count_paper_literal_log2",
             f"{log2_fraction(self.s_count_paper_literal):.6f}"),
            ("keyspace.delta_count", str(self.delta_count)),
            ("keyspace.delta_log2", f"{self.delta_log2:.6f}"),
            ("keyspace.pi_mean_log2", f"{self.pi_log2:.6f}"),
            ("keyspace.gamma_log2", f"{self.gamma_log2:.6f}"),
            ("keyspace.total_log2", f"{self.total_log2:.6f}"),
            ("keyspace.s_count_formula_discrepancy",
             str(self.s_count != self.s_count_paper_literal).lower()),
            ("keyspace.u_count_formula_discrepancy", str(self.u_count_discrepancy).lower()),
        ]


def keyspace_report(params: SchemeParams) -> KeySpaceReport:
    """Aggregate the key-space factors for a parameter set.

    The Delta factor counts admissible profiles (1 when mu = 0, since only
    the identity remains); the Pi factor is the log2 mean number of block
    matrices per profile, so the parts add up to the exact total; Gamma
    contributes n! permutations.
    """
    q, n, k = params.field.q, params.n, params.k
    s_literal, s_derived = count_S_keys(q, k, params.mu, params.nu)
    nprof = max(count_delta(n, params.mu), 1) if params.mu >= 1 else 1
    nprof_enum, pi_total = count_pi_total(n, params.mu, q, use_derived=True)
    _, pi_total_literal = count_pi_total(n, params.mu, q, use_derived=False)
    if params.mu >= 1 and nprof_enum != nprof:
        raise AssertionError("profile enumeration disagrees with the counting formula")
    label = f"q={q} n={n} k={k} mu={params.mu} nu={params.nu}"
    return KeySpaceReport(
        params_label=label,
        s_count=s_derived,
        s_count_paper_literal=s_literal,
        delta_count=nprof,
        pi_mean=Fraction(pi_total, nprof),
        pi_total=pi_total,
        gamma_count=math.factorial(n),
        u_count_discrepancy=pi_total != pi_total_literal,
    )


# -- ISD formulas ------------------------------------------------------------------


@dataclass(frozen=True)
class SternParams:
    """Stern guesses: split weight p (even) inside the information set, and a
    length-m zero window outside it."""

    p: int
    m: int

    def __post_init__(self):
        if self.p < 0 or self.p % 2:
            raise ParameterError(f"weight guess p must be even and >= 0, got {self.p}")
        if self.m < 0:
            raise ParameterError(f"zero-window length m must be >= 0, got {self.m}")


ISDModel = Union[str, SternParams]


def _stern_dimensions(n: int, k: int, ell: int, mu: int, nu: int) -> tuple[int, int]:
    if ell < 0:
        raise ParameterError("ell must be >= 0")
    N = n * (ell + mu + nu + 1)
    K = k * (ell + 1)
    return N, K


def _stern_iteration_probability(K: int, N: int, t: int, sp: SternParams) -> Fraction:
    """C(ceil(K/2), p/2) C(floor(K/2), p/2) C(N-K-m, t-p) / C(N, t).

    An odd information-set size splits into uneven halves; the published
    formula squares C(K/2, p/2) assuming K even.
    """
    denom = _comb(N, t)
    if denom == 0:
        return Fraction(0)
    num = (_comb((K + 1) // 2, sp.p // 2) * _comb(K // 2, sp.p // 2)
           * _comb(N - K - sp.m, t - sp.p))
    return Fraction(num, denom)


def stern_success_probability(n: int, k: int, ell: int, mu: int, nu: int, t: int,
                              sp: SternParams) -> Fraction:
    """Single-iteration success probability against the full sliding code."""
    N, K = _stern_dimensions(n, k, ell, mu, nu)
    return _stern_iteration_probability(K, N, t, sp)


def stern_search_time(n: int, k: int, ell: int, mu: int, nu: int, t: int,
                      sp: SternParams) -> Fraction:
    """Per-iteration cost C1*p*m + (C1*C2 / 2^m) * (p*(N-K-m) + 1).

    C1 = C(ceil(K/2), p/2) and C2 = C(floor(K/2), p/2); the trailing O(1)
    term of the published expression is taken as 1.
    """
    N, K = _stern_dimensions(n, k, ell, mu, nu)
    c1 = _comb((K + 1) // 2, sp.p // 2)
    c2 = _comb(K // 2, sp.p // 2)
    return (Fraction(c1 * sp.p * sp.m)
            + Fraction(c1 * c2, 2**sp.m) * (sp.p * (N - K - sp.m) + 1))


@dataclass(frozen=True)
class AttackReport:
    success_probability: Fraction
    per_iteration_cost: Fraction

    def __post_init__(self):
        if not 0 <= self.success_probability <= 1:
            raise ParameterError("probability outside [0, 1]")

    @property
    def expected_iterations(self) -> Fraction:
        if self.success_probability == 0:
            return Fraction(0)
        return 1 / self.success_probability

    @property
    def success_probability_log2(self) -> float:
        return log2_fraction(self.success_probability)

    @property
    def work_factor_log2(self) -> float:
        if self.success_probability == 0:
            return float("inf")
        return log2_fraction(self.per_iteration_cost * self.expected_iterations)


def stern_attack_report(n: int, k: int, ell: int, mu: int, nu: int, t: int,
                        sp: SternParams) -> AttackReport:
    return AttackReport(
        success_probability=stern_success_probability(n, k, ell, mu, nu, t, sp),
        per_iteration_cost=stern_search_time(n, k, ell, mu, nu, t, sp),
    )


# -- truncated-interval analysis -----------------------------------------------------


def truncated_error_budget(s: int, mu: int, t: int) -> int:
    """Maximum total error weight over coefficients 0..s under the window
    condition: t * ceil((s+1) / (2*mu+1)), attained by front-loading one
    full-weight coefficient per window."""
    if s < 0:
        raise ParameterError("s must be >= 0")
    width = 2 * mu + 1
    return t * ((s + width) // width)


def truncated_rank(pk: PublicKey, s: int) -> tuple[int, int]:
    """(k_s, t_s): rank of the truncated sliding generator over GF(q) and the
    worst-case tolerable error count in the same interval."""
    mat = truncated_generator(pk, s)
    k_s = linalg.rank(pk.field, mat)
    return k_s, truncated_error_budget(s, pk.mu, pk.t)


def isd_success_probability(model: ISDModel, K: int, N: int, t: int) -> Fraction:
    """Single-iteration success probability P(K, N, t) of the chosen model.

    prange: an information set avoids all t error positions,
    C(N - t, K) / C(N, K); stern(p, m): the split-weight guess probability.
    """
    if isinstance(model, SternParams):
        return _stern_iteration_probability(K, N, t, model)
    if model == "prange":
        denom = _comb(N, K)
        if denom == 0:
            return Fraction(0)
        return Fraction(_comb(N - t, K), denom)
    raise ParameterError(f"unknown ISD model {model!r}")


def truncated_recovery_probability(pk: PublicKey, s: int,
                                   model: ISDModel = "prange") -> Fraction:
    """q^-(k(s+1) - k_s) * P(k_s, n(s+1), t_s): the rank deficiency forces a
    blind guess of the unconstrained message components before standard ISD
    can run on the truncated interval."""
    k_s, t_s = truncated_rank(pk, s)
    deficiency = pk.k * (s + 1) - k_s
    prefactor = Fraction(1, pk.field.q**deficiency)
    return prefactor * isd_success_probability(model, k_s, pk.n * (s + 1), t_s)
