import itertools

import numpy as np
import pytest

from cmce.exceptions import ParameterError
from cmce.field import Field, FieldElement

from oracles import PolyField


def oracle_for(field: Field) -> PolyField:
    return PolyField(field.p, field.m, field.reduction_poly)


def test_additive_identity_and_char2(f8, f2):
    for a in range(8):
        assert f8.add(a, 0) == a
    assert f2.add(1, 1) == 0


def test_f8_addition_matches_polynomial_oracle(f8):
    oracle = oracle_for(f8)
    assert f8.add(3, 5) == oracle.add(3, 5) == 6
    for a in range(8):
        for b in range(8):
            assert f8.add(a, b) == oracle.add(a, b)


def test_multiplicative_identity_and_zero(f8, f256):
    for field in (f8, f256):
        for a in range(field.q):
            assert field.mul(a, 1) == a
            assert field.mul(a, 0) == 0


def test_f8_multiplication_matches_schoolbook_oracle(f8):
    oracle = oracle_for(f8)
    assert f8.mul(2, 4) == oracle.mul(2, 4) == 3   # x * x^2 = x + 1
    for a in range(8):
        for b in range(8):
            assert f8.mul(a, b) == oracle.mul(a, b)


@pytest.mark.parametrize("q", [4, 9, 16, 25, 49, 64, 256])
def test_multiplication_matches_oracle_random(q, rng):
    field = Field.from_order(q)
    oracle = oracle_for(field)
    for _ in range(300):
        a, b = (int(x) for x in rng.integers(0, q, 2))
        assert field.mul(a, b) == oracle.mul(a, b)
        assert field.add(a, b) == oracle.add(a, b)


def test_inverse_examples(f7, f8):
    assert f7.inv(1) == 1
    # exhaustive-search oracles
    assert next(x for x in range(1, 7) if (3 * x) % 7 == 1) == 5
    assert f7.inv(3) == 5
    oracle = oracle_for(f8)
    assert oracle.inv(2) == 5
    assert f8.inv(2) == 5


def test_inverse_of_zero_raises(f8):
    with pytest.raises(ZeroDivisionError):
        f8.inv(0)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64])
def test_ring_axioms_exhaustive_small_fields(q):
    field = Field.from_order(q)
    elements = range(q)
    for a, b, c in itertools.product(elements, repeat=3):
        assert field.add(field.add(a, b), c) == field.add(a, field.add(b, c))
        assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))


@pytest.mark.parametrize("q", [128, 256, 343, 512])
def test_ring_axioms_randomized_larger_fields(q, rng):
    field = Field.from_order(q)
    for _ in range(2000):
        a, b, c = (int(x) for x in rng.integers(0, q, 3))
        assert field.add(field.add(a, b), c) == field.add(a, field.add(b, c))
        assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
        assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))


@pytest.mark.parametrize("q", [2, 3, 8, 16, 81, 251, 256])
def test_lagrange_every_nonzero_element(q):
    field = Field.from_order(q)
    for a in range(1, q):
        assert field.pow(a, q - 1) == 1
        assert field.mul(a, field.inv(a)) == 1


def test_largest_supported_field():
    field = Field(2, 16)
    assert field.q == 65536
    assert field.element_size == 2
    oracle = oracle_for(field)
    rng = np.random.default_rng(5)
    for _ in range(50):
        a, b = (int(x) for x in rng.integers(0, field.q, 2))
        assert field.mul(a, b) == oracle.mul(a, b)
    with pytest.raises(ParameterError):
        Field(2, 17)


def test_reducible_polynomial_rejected():
    # x^2 + 1 = (x + 1)^2 over F_2
    with pytest.raises(ParameterError):
        Field(2, 2, (1, 0, 1))
    with pytest.raises(ParameterError):
        Field(4, 1)  # characteristic must be prime


def test_default_f256_polynomial(f256):
    # x^8 + x^4 + x^3 + x^2 + 1
    assert f256.reduction_poly == (1, 0, 1, 1, 1, 0, 0, 0, 1)


def test_array_ops_match_scalar_ops(f8, f9, f256, rng):
    for field in (f8, f9, f256):
        a = rng.integers(0, field.q, size=200).astype(np.int32)
        b = rng.integers(0, field.q, size=200).astype(np.int32)
        add = field.add_arr(a, b)
        mul = field.mul_arr(a, b)
        sub = field.sub_arr(a, b)
        for i in range(200):
            assert add[i] == field.add(int(a[i]), int(b[i]))
            assert mul[i] == field.mul(int(a[i]), int(b[i]))
            assert sub[i] == field.sub(int(a[i]), int(b[i]))


def test_matmul_matches_scalar_triple_loop(f8, f9, rng):
    for field in (f8, f9):
        a = rng.integers(0, field.q, size=(6, 4)).astype(np.int32)
        b = rng.integers(0, field.q, size=(4, 5)).astype(np.int32)
        c = field.matmul(a, b)
        for i in range(6):
            for j in range(5):
                acc = 0
                for l in range(4):
                    acc = field.add(acc, field.mul(int(a[i, l]), int(b[l, j])))
                assert c[i, j] == acc


def test_field_element_wrapper(f8, f7):
    a = f8.element(3)
    b = f8.element(5)
    assert (a + b).value == 6
    assert (a * b) == f8.element(f8.mul(3, 5))
    assert a.inverse() * a == f8.element(1)
    assert (a - a).value == 0
    with pytest.raises(ParameterError):
        _ = a + f7.element(1)
    with pytest.raises(ParameterError):
        FieldElement(f8, 9)


def test_field_equality_and_orders():
    assert Field(2, 3) == Field(2, 3)
    assert Field(2, 3) != Field(2, 3, (1, 0, 1, 1))  # same order, other polynomial
