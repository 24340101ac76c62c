"""Arithmetic in GF(q), q = p^m, backed by log/antilog tables.

Elements are canonical integer representatives in [0, q): the base-p digits
of the representative are the coefficients of the polynomial residue, lowest
degree first.  Scalar operations work on plain ints; the ``*_arr`` variants
and ``matmul`` work on numpy integer arrays and are the hot path everywhere
else in the package.  Tables are immutable after construction, so a Field
may be shared freely across threads.

Fields up to q = 2**16 are supported (the serialization element size is one
byte for q <= 256 and two bytes beyond).
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .exceptions import ParameterError

MAX_FIELD_ORDER = 1 << 16

# Irreducible (primitive) reduction polynomials for GF(2^m), bit i = coeff of x^i.
# m = 8 is x^8 + x^4 + x^3 + x^2 + 1, the classic Reed-Solomon choice.
_BINARY_DEFAULT_POLYS = {
    1: 0b10,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(num: list[int], den: Sequence[int], p: int) -> list[int]:
    """Remainder of num / den over F_p; den must be monic."""
    num = _poly_trim(list(num))
    dd = len(den) - 1
    while len(num) - 1 >= dd:
        shift = len(num) - 1 - dd
        lead = num[-1]
        for i, c in enumerate(den):
            num[shift + i] = (num[shift + i] - lead * c) % p
        _poly_trim(num)
    return num


def _poly_is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(poly)/2."""
    m = len(poly) - 1
    if m < 1:
        return False
    for deg in range(1, m // 2 + 1):
        for idx in range(p**deg):
            cand = []
            v = idx
            for _ in range(deg):
                cand.append(v % p)
                v //= p
            cand.append(1)
            rem = _poly_mod(list(poly), cand, p)
            if not rem:
                return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class Field:
    """GF(p^m) defined by a monic irreducible reduction polynomial over F_p.

    Parameters
    ----------
    p : characteristic (prime).
    m : extension degree.
    reduction_poly : m+1 coefficients in [0, p), lowest degree first, monic.
        Defaults to a standard polynomial for GF(2^m) and to x for m = 1.
    """

    def __init__(self, p: int, m: int = 1, reduction_poly: Optional[Sequence[int]] = None):
        if not _is_prime(p):
            raise ParameterError(f"characteristic {p} is not prime")
        if m < 1:
            raise ParameterError(f"extension degree must be >= 1, got {m}")
        q = p**m
        if q > MAX_FIELD_ORDER:
            raise ParameterError(f"field order {q} exceeds the supported bound 2^16")

        if reduction_poly is None:
            if m == 1:
                reduction_poly = (0, 1)
            elif p == 2:
                bits = _BINARY_DEFAULT_POLYS[m]
                reduction_poly = tuple((bits >> i) & 1 for i in range(m + 1))
            else:
                reduction_poly = self._search_irreducible(p, m)
        reduction_poly = tuple(int(c) % p for c in reduction_poly)
        if len(reduction_poly) != m + 1:
            raise ParameterError(f"reduction polynomial must have {m + 1} coefficients")
        if reduction_poly[-1] != 1:
            raise ParameterError("reduction polynomial must be monic")
        if m > 1 and not _poly_is_irreducible(reduction_poly, p):
            raise ParameterError("reduction polynomial is not irreducible over F_p")

        self.p = p
        self.m = m
        self.q = q
        self.reduction_poly = reduction_poly
        self._build_tables()

    @staticmethod
    def _search_irreducible(p: int, m: int) -> tuple[int, ...]:
        for idx in range(p**m):
            low = []
            v = idx
            for _ in range(m):
                low.append(v % p)
                v //= p
            cand = tuple(low) + (1,)
            if _poly_is_irreducible(cand, p):
                return cand
        raise ParameterError(f"no irreducible polynomial of degree {m} over F_{p} found")

    @classmethod
    def from_order(cls, q: int, reduction_poly: Optional[Sequence[int]] = None) -> "Field":
        """Build GF(q) after factoring q = p^m."""
        if q < 2:
            raise ParameterError(f"field order must be >= 2, got {q}")
        p = min(_prime_factors(q))
        m = 0
        v = q
        while v > 1:
            if v % p:
                raise ParameterError(f"{q} is not a prime power")
            v //= p
            m += 1
        return cls(p, m, reduction_poly)

    # -- construction helpers -------------------------------------------------

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return out

    def _from_digits(self, d: Sequence[int]) -> int:
        v = 0
        for c in reversed(list(d)):
            v = v * self.p + (c % self.p)
        return v

    def _mul_schoolbook(self, a: int, b: int) -> int:
        """Polynomial product mod the reduction polynomial, table-free."""
        if self.m == 1:
            return (a * b) % self.p
        if self.p == 2:
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a & self.q:
                    a ^= self._redpoly_bits
            return r
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        rem = _poly_mod(prod, self.reduction_poly, self.p)
        return self._from_digits(rem + [0] * (self.m - len(rem)))

    def _pow_schoolbook(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_schoolbook(r, a)
            a = self._mul_schoolbook(a, a)
            e >>= 1
        return r

    def _find_generator(self) -> int:
        r = self.q - 1
        if r == 1:
            return 1
        factors = _prime_factors(r)
        for cand in range(2, self.q):
            if all(self._pow_schoolbook(cand, r // f) != 1 for f in factors):
                return cand
        raise AssertionError("multiplicative group has no generator; tables are broken")

    def _build_tables(self):
        q = self.q
        order = q - 1
        self._order = order
        if self.p == 2:
            self._redpoly_bits = sum(c << i for i, c in enumerate(self.reduction_poly))

        g = self._find_generator()
        self.generator = g
        exp = [0] * (2 * order)
        log = [-1] * q
        x = 1
        for i in range(order):
            exp[i] = x
            exp[i + order] = x
            if log[x] != -1:
                raise AssertionError("generator walk revisited an element; tables are broken")
            log[x] = i
            x = self._mul_schoolbook(x, g)
        if x != 1:
            raise AssertionError("generator order mismatch")
        self._exp = exp
        self._log = log
        inv = [0] * q
        for a in range(1, q):
            inv[a] = exp[(order - log[a]) % order]
        self._inv = inv

        # Vector tables: LOG_S maps 0 to a sentinel Z = 2*order; EXP_S returns 0
        # for any index >= Z, so products with a zero factor land on 0 without
        # branching.  Nonzero log sums stay strictly below Z.
        Z = 2 * order if order > 0 else 2
        exps = np.zeros(2 * Z + 1, dtype=np.int32)
        for i in range(max(2 * order - 1, 1)):
            exps[i] = exp[i % order] if order > 0 else 1
        logs = np.empty(q, dtype=np.int32)
        logs[0] = Z
        for a in range(1, q):
            logs[a] = log[a]
        self._EXP_S = exps
        self._LOG_S = logs
        self._INV_NP = np.array(inv, dtype=np.int32)

        if self.p != 2:
            neg = [(self.p - a) % self.p if self.m == 1 else
                   self._from_digits([(self.p - d) % self.p for d in self._digits(a)])
                   for a in range(q)]
            self._NEG_NP = np.array(neg, dtype=np.int32)
            self._neg = neg
            if self.m > 1:
                self._DIG_NP = np.array([self._digits(a) for a in range(q)], dtype=np.int64)
                self._POW_P = self.p ** np.arange(self.m, dtype=np.int64)

    # -- scalar operations -----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        return self._from_digits([(x + y) % self.p
                                  for x, y in zip(self._digits(a), self._digits(b))])

    def neg(self, a: int) -> int:
        return a if self.p == 2 else self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("0 has no negative powers")
            return 0
        return self._exp[(self._log[a] * e) % self._order] if self._order else 1

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    # -- array operations --------------------------------------------------------

    def add_arr(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.m == 1:
            return (a + b) % self.p
        d = (self._DIG_NP[a] + self._DIG_NP[b]) % self.p
        return (d @ self._POW_P).astype(np.int32)

    def neg_arr(self, a: np.ndarray) -> np.ndarray:
        return a if self.p == 2 else self._NEG_NP[a]

    def sub_arr(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.add_arr(a, self.neg_arr(b))

    def mul_arr(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self._EXP_S[self._LOG_S[a] + self._LOG_S[b]]

    def inv_arr(self, a: np.ndarray) -> np.ndarray:
        if not np.all(a):
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self._INV_NP[a]

    def _reduce_add(self, m: np.ndarray, axis: int) -> np.ndarray:
        if self.p == 2:
            return np.bitwise_xor.reduce(m, axis=axis)
        if self.m == 1:
            return (m.sum(axis=axis, dtype=np.int64) % self.p).astype(np.int32)
        d = self._DIG_NP[m].sum(axis=axis) % self.p
        return (d @ self._POW_P).astype(np.int32)

    def prepare_log(self, mat: np.ndarray) -> np.ndarray:
        """Precomputed log image of a constant matrix, for repeated matmuls."""
        return self._LOG_S[np.asarray(mat, dtype=np.int32)]

    def matmul(self, a: np.ndarray, b: np.ndarray, *, b_log: Optional[np.ndarray] = None,
               _chunk: int = 1 << 22) -> np.ndarray:
        """Product a @ b over the field; a has shape (..., K), b has shape (K, M)."""
        a = np.asarray(a, dtype=np.int32)
        bl = b_log if b_log is not None else self._LOG_S[np.asarray(b, dtype=np.int32)]
        k_dim, m_dim = bl.shape
        lead = a.shape[:-1]
        a2 = a.reshape(-1, k_dim)
        rows = a2.shape[0]
        out = np.empty((rows, m_dim), dtype=np.int32)
        step = max(1, _chunk // max(1, k_dim * m_dim))
        la = self._LOG_S[a2]
        for i in range(0, rows, step):
            block = self._EXP_S[la[i:i + step, :, None] + bl[None, :, :]]
            out[i:i + step] = self._reduce_add(block, axis=1)
        return out.reshape(*lead, m_dim)

    # -- misc ---------------------------------------------------------------------

    @property
    def element_size(self) -> int:
        """Bytes per element on the wire: 1 if q <= 256, else 2 (little-endian)."""
        return 1 if self.q <= 256 else 2

    def __eq__(self, other):
        return (isinstance(other, Field)
                and self.p == other.p and self.m == other.m
                and self.reduction_poly == other.reduction_poly)

    def __hash__(self):
        return hash((self.p, self.m, self.reduction_poly))

    def __repr__(self):
        return f"Field(p={self.p}, m={self.m}, q={self.q})"


class FieldElement:
    """A scalar bound to its Field, with operator syntax for tests and examples."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        value = int(value)
        if not 0 <= value < field.q:
            raise ParameterError(f"value {value} outside [0, {field.q})")
        self.field = field
        self.value = value

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ParameterError("operands belong to different fields")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.q
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        return FieldElement(self.field, self.field.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return FieldElement(self.field, self.field.sub(self.value, v))

    def __mul__(self, other):
        v = self._coerce(other)
        return FieldElement(self.field, self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        return FieldElement(self.field, self.field.div(self.value, v))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.value} in GF({self.field.q}))"
