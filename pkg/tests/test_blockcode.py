import itertools

import numpy as np
import pytest

from cmce.blockcode import make_code
from cmce.exceptions import DecodeFailure, ParameterError

from oracles import eval_message_poly


@pytest.fixture(scope="module")
def rs73(f8):
    return make_code("reed-solomon", f8, 7, 3)


@pytest.fixture(scope="module")
def rs3216(f256):
    return make_code("reed-solomon", f256, 32, 16)


def test_parameters(rs73, rs3216):
    assert rs73.t == 2 and rs3216.t == 8
    assert rs73.G.shape == (3, 7) and rs3216.G.shape == (16, 32)


def test_encode_zero_and_unit_vectors(rs73):
    assert not rs73.encode(np.zeros(3, dtype=np.int32)).any()
    unit = np.array([1, 0, 0], dtype=np.int32)
    assert np.array_equal(rs73.encode(unit), rs73.G[0])


def test_encode_is_polynomial_evaluation(rs73, f8, rng):
    for _ in range(50):
        u = rng.integers(0, 8, 3).astype(np.int32)
        c = rs73.encode(u)
        for j in range(7):
            assert c[j] == eval_message_poly(f8, u, j + 1)


def test_decode_zero_error(rs73, rng):
    for _ in range(20):
        u = rng.integers(0, 8, 3).astype(np.int32)
        c = rs73.encode(u)
        uu, ee = rs73.decode(c)
        assert np.array_equal(uu, u) and not ee.any()


def test_rs73_exhaustive_correction(rs73, f8, rng):
    """Every error of weight <= 2 on a fixed codeword decodes exactly."""
    u = rng.integers(0, 8, 3).astype(np.int32)
    c = rs73.encode(u)
    checked = 0
    singles = itertools.combinations(range(7), 1)
    doubles = itertools.combinations(range(7), 2)
    for positions in itertools.chain(singles, doubles):
        for values in itertools.product(range(1, 8), repeat=len(positions)):
            y = c.copy()
            expected_e = np.zeros(7, dtype=np.int32)
            for p, v in zip(positions, values):
                y[p] = f8.add(int(y[p]), v)
                expected_e[p] = v
            uu, ee = rs73.decode(y)
            assert np.array_equal(uu, u)
            assert np.array_equal(ee, expected_e)
            checked += 1
    assert checked == 7 * 7 + 21 * 49


def test_rs73_weight3_is_not_silently_corrected(rs73, f8):
    """A weight-3 pattern outside every decoding sphere must fail loudly."""
    u = np.array([1, 2, 3], dtype=np.int32)
    c = rs73.encode(u)
    codewords = [rs73.encode(np.array(m, dtype=np.int32))
                 for m in itertools.product(range(8), repeat=3)]

    def min_distance_to_code(y):
        return min(int((y != cw).sum()) for cw in codewords)

    found = None
    for positions in itertools.combinations(range(7), 3):
        for values in itertools.product(range(1, 8), repeat=3):
            y = c.copy()
            for p, v in zip(positions, values):
                y[p] = f8.add(int(y[p]), v)
            if min_distance_to_code(y) > 2:
                found = y
                break
        if found is not None:
            break
    assert found is not None, "every weight-3 pattern fell inside a sphere"
    with pytest.raises(DecodeFailure):
        rs73.decode(found)


def test_rs3216_randomized_perfect_correction(rs3216, f256, rng):
    """>= 10^4 random (message, weight<=t error) pairs decode exactly."""
    trials = 10000
    k, n, t = rs3216.k, rs3216.n, rs3216.t
    messages = rng.integers(0, 256, size=(trials, k)).astype(np.int32)
    codewords = f256.matmul(messages, rs3216.G)
    weights = rng.integers(0, t + 1, size=trials)
    for i in range(trials):
        y = codewords[i].copy()
        w = int(weights[i])
        pos = rng.choice(n, size=w, replace=False)
        vals = 1 + rng.integers(0, 255, size=w)
        for p, v in zip(pos, vals):
            y[p] = f256.add(int(y[p]), int(v))
        u, e = rs3216.decode(y)
        assert np.array_equal(u, messages[i])
        assert int((e != 0).sum()) == w


def test_rs_over_prime_field(f7, rng):
    code = make_code("reed-solomon", f7, 6, 2)
    assert code.t == 2
    for _ in range(300):
        u = rng.integers(0, 7, 2).astype(np.int32)
        y = code.encode(u)
        w = int(rng.integers(0, 3))
        pos = rng.choice(6, size=w, replace=False)
        for p in pos:
            y[p] = f7.add(int(y[p]), int(1 + rng.integers(6)))
        uu, ee = code.decode(y)
        assert np.array_equal(uu, u) and int((ee != 0).sum()) == w


def test_identity_code(f8, rng):
    code = make_code("identity-test-code", f8, 7, 3)
    assert code.t == 0
    u = rng.integers(0, 8, 3).astype(np.int32)
    c = code.encode(u)
    assert np.array_equal(c[:3], u) and not c[3:].any()
    uu, ee = code.decode(c)
    assert np.array_equal(uu, u) and not ee.any()
    bad = c.copy()
    bad[5] = 1
    with pytest.raises(DecodeFailure):
        code.decode(bad)


def test_usage_errors(f8, rs73):
    with pytest.raises(ParameterError):
        rs73.encode(np.zeros(4, dtype=np.int32))
    with pytest.raises(ParameterError):
        rs73.decode(np.zeros(6, dtype=np.int32))
    with pytest.raises(ParameterError):
        make_code("reed-solomon", f8, 8, 3)   # needs q > n
    with pytest.raises(ParameterError):
        make_code("no-such-family", f8, 7, 3)


def test_code_cache_returns_same_object(f8):
    a = make_code("reed-solomon", f8, 7, 3)
    b = make_code("reed-solomon", f8, 7, 3)
    assert a is b
