from collections import Counter

import numpy as np
import pytest

from cmce.exceptions import ParameterError
from cmce.field import Field
from cmce.laurent import (DeltaProfile, LaurentMatrix, PiMatrix, compose_T, count_U,
                          count_delta, enumerate_delta_profiles, invert_T,
                          partition_count, sample_delta, sample_permutation,
                          sample_pi, validate_T)
from cmce import linalg

from oracles import brute_force_delta_profiles, brute_force_partitions


def random_laurent(field, rng, rows, cols, low, high):
    coeffs = rng.integers(0, field.q, size=(high - low + 1, rows, cols)).astype(np.int32)
    return LaurentMatrix(field, low, coeffs)


def sample_T_factors(field, n, mu, rng, density=0.6):
    profile = sample_delta(n, mu, rng)
    pi = sample_pi(field, profile, rng, density)
    gamma = sample_permutation(n, rng)
    return pi, profile, gamma


# -- multiplication -----------------------------------------------------------


def test_mul_identity(f8, rng):
    a = random_laurent(f8, rng, 3, 3, -1, 2)
    assert a.mul(LaurentMatrix.identity(f8, 3)) == a
    assert LaurentMatrix.identity(f8, 3).mul(a) == a


def test_mul_monomial_cancellation(f8):
    n = 3
    d_pos = LaurentMatrix(f8, 1, np.eye(n, dtype=np.int32)[None])
    d_neg = LaurentMatrix(f8, -1, np.eye(n, dtype=np.int32)[None])
    assert d_pos.mul(d_neg) == LaurentMatrix.identity(f8, n)


def test_mul_matches_evaluation_homomorphism(f7, rng):
    """A(x) B(x) = (AB)(x) at random nonzero points."""
    for _ in range(20):
        a = random_laurent(f7, rng, 3, 3, -1, 1)
        b = random_laurent(f7, rng, 3, 3, -1, 1)
        ab = a.mul(b)
        for _ in range(20):
            x = int(1 + rng.integers(6))
            lhs = f7.matmul(a.eval_at(x), b.eval_at(x))
            assert np.array_equal(lhs, ab.eval_at(x))


def test_mul_dimension_and_field_mismatch(f7, f8, rng):
    a = random_laurent(f8, rng, 3, 4, 0, 1)
    with pytest.raises(ParameterError):
        a.mul(random_laurent(f8, rng, 3, 3, 0, 1))
    with pytest.raises(ParameterError):
        a.mul(random_laurent(f7, rng, 4, 4, 0, 1))


def test_trimming_is_canonical(f8):
    coeffs = np.zeros((5, 2, 2), dtype=np.int32)
    coeffs[2] = np.eye(2, dtype=np.int32)
    m = LaurentMatrix(f8, -2, coeffs)
    assert m.low == 0 and m.high == 0
    assert m == LaurentMatrix.identity(f8, 2)
    z = LaurentMatrix(f8, 3, np.zeros((2, 2, 2), dtype=np.int32))
    assert z.is_zero() and z.low == 0


# -- partition counting --------------------------------------------------------


def test_partition_count_single_part():
    for mu in range(0, 6):
        for r in range(0, 12):
            assert partition_count(r, 1, mu) == (1 if 1 <= r <= mu else 0)


def test_partition_count_examples_from_brute_force():
    assert len(brute_force_partitions(4, 2, 3)) == 2    # {3,1}, {2,2}
    assert partition_count(4, 2, 3) == 2
    # direct enumeration gives 2 ({4,4,2}, {4,3,3})
    assert len(brute_force_partitions(10, 3, 4)) == 2
    assert partition_count(10, 3, 4) == 2


def test_partition_count_full_grid_vs_brute_force():
    for r in range(0, 21):
        for i in range(0, r + 2):
            for mu in range(0, 7):
                assert partition_count(r, i, mu) == len(brute_force_partitions(r, i, mu))


def test_count_delta_examples():
    assert count_delta(5, 0) == 0
    assert count_delta(2, 1) == len(brute_force_delta_profiles(2, 1)) == 1
    assert count_delta(4, 1) == len(brute_force_delta_profiles(4, 1)) == 2


def test_count_delta_grid_vs_brute_force():
    for n in range(1, 9):
        for mu in range(0, 4):
            assert count_delta(n, mu) == len(brute_force_delta_profiles(n, mu))


def test_enumerate_matches_brute_force():
    for n in range(2, 9):
        for mu in range(1, 4):
            got = sorted(p.counts for p in enumerate_delta_profiles(n, mu))
            assert got == sorted(brute_force_delta_profiles(n, mu))


# -- profile sampling ------------------------------------------------------------


def test_sample_delta_mu0_forced(rng):
    assert sample_delta(5, 0, rng) == DeltaProfile(0, (5,))


def test_sample_delta_n2_unique(rng):
    for _ in range(20):
        assert sample_delta(2, 1, rng).counts == (1, 0, 1)


def test_sample_delta_uniform_n4(rng):
    counts = Counter(sample_delta(4, 1, rng).counts for _ in range(10000))
    assert set(counts) == {(1, 2, 1), (2, 0, 2)}
    for c in counts.values():
        assert abs(c / 10000 - 0.5) < 0.05


def test_sample_delta_errors(rng):
    with pytest.raises(ParameterError):
        sample_delta(1, 1, rng)


def test_profile_validation():
    with pytest.raises(ParameterError):
        DeltaProfile(1, (1, 0, 2))        # unbalanced
    with pytest.raises(ParameterError):
        DeltaProfile(1, (1, 1))           # wrong width
    p = DeltaProfile(2, (1, 0, 2, 2, 0))  # 2*1 = 1*2, radius not attained
    assert p.n == 5 and not p.is_identity()


# -- Pi sampling and U counting -----------------------------------------------------


def test_sample_pi_density_zero_is_identity(f8, rng):
    profile = DeltaProfile(1, (2, 1, 2))
    pi = sample_pi(f8, profile, rng, 0.0)
    assert np.array_equal(pi.matrix, np.eye(5, dtype=np.int32))


def test_sample_pi_always_invertible(f8, f7, rng):
    for field in (f8, f7):
        for _ in range(100):
            profile = sample_delta(6, 2, rng)
            pi = sample_pi(field, profile, rng, 1.0)
            assert linalg.is_invertible(field, pi.matrix)


def test_sample_pi_f2_density_one_forced(f2, rng):
    """Profile (1,0,1) over F_2 at density 1: the single above-diagonal slot
    must hold the only nonzero value."""
    profile = DeltaProfile(1, (1, 0, 1))
    pi = sample_pi(f2, profile, rng, 1.0)
    assert np.array_equal(pi.matrix, np.array([[1, 1], [0, 1]], dtype=np.int32))


def test_pi_structure_validation(f8):
    profile = DeltaProfile(1, (1, 1, 1))
    bad = np.eye(3, dtype=np.int32)
    bad[2, 0] = 1                          # below diagonal
    with pytest.raises(ParameterError):
        PiMatrix(f8, profile, bad)
    # one nonzero per block in a row is fine, two in the same block is not
    wide = DeltaProfile(1, (2, 1, 2))
    ok = np.eye(5, dtype=np.int32)
    ok[0, 2] = 3
    ok[0, 3] = 4
    PiMatrix(f8, wide, ok)
    bad2 = np.eye(5, dtype=np.int32)
    bad2[0, 3] = 1
    bad2[0, 4] = 1
    with pytest.raises(ParameterError):
        PiMatrix(f8, wide, bad2)


def test_count_U_enumeration_oracle():
    """Exhaustive enumeration of rows x cols matrices with <= 1 nonzero per row."""

    def enumerate_count(rows, cols, q):
        import itertools
        total = 0
        for flat in itertools.product(range(q), repeat=rows * cols):
            if all(sum(1 for c in range(cols) if flat[r * cols + c]) <= 1
                   for r in range(rows)):
                total += 1
        return total

    cases = [(1, 1, 2), (1, 2, 2), (2, 1, 3), (2, 2, 2), (3, 2, 3)]
    for rows, cols, q in cases:
        literal, derived = count_U(rows, cols, q)
        assert derived == enumerate_count(rows, cols, q)
    assert count_U(1, 1, 2) == (2, 2)
    assert count_U(1, 2, 2) == (3, 3)
    literal, derived = count_U(2, 1, 3)
    assert derived == 9 and literal == 8   # the published formula disagrees here


# -- compose / validate / invert -----------------------------------------------------


def test_compose_identity_factors(f8):
    profile = DeltaProfile(0, (4,))
    pi = PiMatrix(f8, profile, np.eye(4, dtype=np.int32))
    t = compose_T(pi, profile, np.arange(4))
    assert t == LaurentMatrix.identity(f8, 4)


def test_compose_pure_delta(f8):
    profile = DeltaProfile(1, (1, 0, 1))
    pi = PiMatrix(f8, profile, np.eye(2, dtype=np.int32))
    t = compose_T(pi, profile, np.arange(2))
    assert t.coeff(-1)[0, 0] == 1 and t.coeff(1)[1, 1] == 1
    assert not t.coeff(0).any()
    p = invert_T(pi, profile, np.arange(2))
    assert p.coeff(1)[0, 0] == 1 and p.coeff(-1)[1, 1] == 1


def test_validate_T_identity(f8):
    assert validate_T(LaurentMatrix.identity(f8, 3)) == []


def test_validate_T_unbalanced(f8):
    t = LaurentMatrix(f8, 1, np.eye(2, dtype=np.int32)[None])  # diag(D, D)
    violations = validate_T(t)
    assert any(v.condition == "balance" for v in violations)


def test_validate_T_shared_column(f8):
    coeffs = np.zeros((2, 2, 2), dtype=np.int32)
    coeffs[0] = [[1, 1], [0, 0]]
    coeffs[1] = [[0, 1], [1, 0]]           # column 1 nonzero in both taps
    violations = validate_T(LaurentMatrix(f8, -1, coeffs))
    assert any(v.condition == "column-partition" for v in violations)


def test_validate_T_row_multiplicity(f8):
    coeffs = np.zeros((1, 2, 2), dtype=np.int32)
    coeffs[0] = [[1, 1], [0, 1]]
    violations = validate_T(LaurentMatrix(f8, 0, coeffs))
    assert any(v.condition == "row-multiplicity" for v in violations)


def test_validate_T_singular_constant(f8):
    coeffs = np.zeros((1, 2, 2), dtype=np.int32)
    coeffs[0] = [[1, 1], [1, 1]]
    violations = validate_T(LaurentMatrix(f8, 0, coeffs))
    assert {v.condition for v in violations} >= {"row-multiplicity", "invertibility"}


@pytest.mark.parametrize("q,n,mu", [(2, 4, 1), (8, 6, 2), (7, 5, 1), (256, 8, 2), (9, 6, 3)])
def test_sampled_T_properties(q, n, mu, rng):
    field = Field.from_order(q)
    ident = LaurentMatrix.identity(field, n)
    for _ in range(100):
        pi, profile, gamma = sample_T_factors(field, n, mu, rng)
        t = compose_T(pi, profile, gamma)
        assert validate_T(t) == []
        p = invert_T(pi, profile, gamma)
        assert t.mul(p) == ident
        assert p.mul(t) == ident
        # nonzero rows of the P_i partition the row set
        seen = np.zeros(n, dtype=bool)
        for i in range(p.coeffs.shape[0]):
            rows = p.coeffs[i].any(axis=1)
            assert not (seen & rows).any()
            seen |= rows
        assert seen.all()


def test_invert_diag_example(f8):
    profile = DeltaProfile(1, (1, 0, 1))
    pi = PiMatrix(f8, profile, np.eye(2, dtype=np.int32))
    gamma = np.arange(2)
    t = compose_T(pi, profile, gamma)
    p = invert_T(pi, profile, gamma)
    assert t.mul(p) == LaurentMatrix.identity(f8, 2)
    # T = diag(1/D, D) inverts to diag(D, 1/D)
    assert p.coeff(1)[0, 0] == 1 and p.coeff(-1)[1, 1] == 1
