"""Inner (n, k) block codes with bounded-distance decoders.

Two families:

* ``reed-solomon`` -- evaluation-form RS at the first n nonzero field
  elements, decoded by syndromes + Berlekamp-Massey + Chien search +
  Forney's formula.  Corrects t = (n - k) // 2 errors and returns the
  error vector alongside the message.
* ``identity-test-code`` -- G = [I_k | 0] with t = 0, used to exercise the
  outer masking layers without any decoder in the loop.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DecodeFailure, ParameterError
from .field import Field
from .linalg import matrix_inverse

FAMILY_REED_SOLOMON = "reed-solomon"
FAMILY_IDENTITY = "identity-test-code"

_code_cache: dict = {}


def make_code(family: str, field: Field, n: int, k: int) -> "BlockCode":
    """Construct (and cache) a block code; the generator is deterministic."""
    key = (family, field, n, k)
    code = _code_cache.get(key)
    if code is None:
        if family == FAMILY_REED_SOLOMON:
            code = ReedSolomonCode(field, n, k)
        elif family == FAMILY_IDENTITY:
            code = IdentityTestCode(field, n, k)
        else:
            raise ParameterError(f"unknown code family {family!r}")
        _code_cache[key] = code
    return code


class BlockCode:
    """Common surface: encode k symbols to n, decode n back to (message, error)."""

    family: str
    field: Field
    n: int
    k: int
    t: int
    G: np.ndarray

    def encode(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=np.int32)
        if u.shape[-1] != self.k:
            raise ParameterError(f"message width {u.shape[-1]} != k = {self.k}")
        return self.field.matmul(u, self.G, b_log=self._G_log)

    def decode(self, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def __eq__(self, other):
        return (isinstance(other, BlockCode) and self.family == other.family
                and self.field == other.field and self.n == other.n and self.k == other.k
                and np.array_equal(self.G, other.G))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, k={self.k}, t={self.t}, q={self.field.q})"


class ReedSolomonCode(BlockCode):
    """RS code {(f(a_1), ..., f(a_n)) : deg f < k} at points a_i = i.

    The points are the first n nonzero field elements, so every inverse
    needed by the Chien search exists.  Syndromes use the generalized
    parity check S_l = sum_i y_i w_i a_i^l with w_i = prod_{j!=i}
    (a_i - a_j)^{-1}; error values come from Forney's formula
    e_i = -a_i W(1/a_i) / (w_i L'(1/a_i)).
    """

    family = FAMILY_REED_SOLOMON

    def __init__(self, field: Field, n: int, k: int):
        if not 0 < k < n:
            raise ParameterError(f"need 0 < k < n, got k={k}, n={n}")
        if field.q <= n:
            raise ParameterError(f"Reed-Solomon needs q > n, got q={field.q}, n={n}")
        self.field = field
        self.n = n
        self.k = k
        self.t = (n - k) // 2

        alphas = np.arange(1, n + 1, dtype=np.int32)
        self.alphas = alphas
        self.inv_alphas = field.inv_arr(alphas)

        # Generator: G[i, j] = a_j ** i (message = polynomial coefficients).
        G = np.empty((k, n), dtype=np.int32)
        G[0] = 1
        for i in range(1, k):
            G[i] = field.mul_arr(G[i - 1], alphas)
        self.G = G
        self._G_log = field.prepare_log(G)

        w = np.empty(n, dtype=np.int32)
        for i in range(n):
            acc = 1
            ai = int(alphas[i])
            for j in range(n):
                if j != i:
                    acc = field.mul(acc, field.sub(ai, int(alphas[j])))
            w[i] = field.inv(acc)
        self.w = w
        self._inv_w = field.inv_arr(w)

        nsynd = 2 * self.t
        synd = np.empty((n, nsynd), dtype=np.int32) if nsynd else np.zeros((n, 0), np.int32)
        if nsynd:
            synd[:, 0] = w
            for l in range(1, nsynd):
                synd[:, l] = field.mul_arr(synd[:, l - 1], alphas)
        self._synd_log = field.prepare_log(synd)
        self._synd_cols = nsynd

        chien = np.empty((self.t + 1, n), dtype=np.int32)
        chien[0] = 1
        for d in range(1, self.t + 1):
            chien[d] = field.mul_arr(chien[d - 1], self.inv_alphas)
        self._chien_log = field.prepare_log(chien)

        # Any right inverse of G maps codewords back to messages; the first k
        # columns form an invertible Vandermonde block.
        g_inv = np.zeros((n, k), dtype=np.int32)
        g_inv[:k, :] = matrix_inverse(field, G[:, :k])
        self.G_right_inverse = g_inv
        self._ginv_log = field.prepare_log(g_inv)

    def _berlekamp_massey(self, S: list[int]) -> tuple[list[int], int]:
        """Minimal LFSR (connection polynomial, length L) for the syndromes S."""
        F = self.field
        C = [1]
        B = [1]
        L = 0
        b = 1
        shift = 1
        for i, s in enumerate(S):
            delta = s
            for j in range(1, min(L, len(C) - 1) + 1):
                if C[j]:
                    delta = F.add(delta, F.mul(C[j], S[i - j]))
            if delta == 0:
                shift += 1
                continue
            coef = F.div(delta, b)
            need = shift + len(B)
            if len(C) < need:
                C = C + [0] * (need - len(C))
            update_base = list(C)
            for j, bj in enumerate(B):
                if bj:
                    C[j + shift] = F.sub(C[j + shift], F.mul(coef, bj))
            if 2 * L <= i:
                L = i + 1 - L
                B = update_base
                b = delta
                shift = 1
            else:
                shift += 1
        while len(C) > 1 and C[-1] == 0:
            C.pop()
        return C, L

    def _poly_eval(self, coeffs: list[int], x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def decode(self, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Recover (u, e) from y = u G + e with wt(e) <= t.

        Raises DecodeFailure when no codeword lies within distance t; with
        more than t errors the call may also return a wrong message, as for
        any bounded-distance decoder.
        """
        F = self.field
        y = np.asarray(y, dtype=np.int32)
        if y.shape != (self.n,):
            raise ParameterError(f"received word has shape {y.shape}, expected ({self.n},)")
        zero_err = np.zeros(self.n, dtype=np.int32)
        if self._synd_cols == 0:
            u = F.matmul(y, self.G_right_inverse, b_log=self._ginv_log)
            if not np.array_equal(self.encode(u), y):
                raise DecodeFailure("received word is not a codeword and t = 0")
            return u, zero_err

        synd = F.matmul(y, None, b_log=self._synd_log)
        if not synd.any():
            return F.matmul(y, self.G_right_inverse, b_log=self._ginv_log), zero_err

        S = [int(v) for v in synd]
        Lambda, L = self._berlekamp_massey(S)
        if L == 0 or L > self.t or len(Lambda) - 1 != L:
            raise DecodeFailure(f"error locator degree {len(Lambda) - 1} (LFSR length {L}) "
                                f"outside (0, {self.t}]")

        # Omega = Lambda * S mod x^{2t}; a consistent <=t-error word leaves
        # all terms of degree >= L equal to zero.
        omega = [0] * (2 * self.t)
        for i, li in enumerate(Lambda):
            if li == 0:
                continue
            for j in range(2 * self.t - i):
                omega[i + j] = F.add(omega[i + j], F.mul(li, S[j]))
        if any(omega[L:]):
            raise DecodeFailure("key equation inconsistent (more than t errors)")
        omega = omega[:L]

        lam = np.zeros(self.t + 1, dtype=np.int32)
        lam[:len(Lambda)] = Lambda
        vals = F.matmul(lam, None, b_log=self._chien_log)
        positions = np.nonzero(vals == 0)[0]
        if positions.size != L:
            raise DecodeFailure(f"locator has {positions.size} roots, expected {L}")

        lam_deriv = [F.mul(c, (i + 1) % F.p) for i, c in enumerate(Lambda[1:])]
        e = zero_err.copy()
        for pos in positions:
            pos = int(pos)
            x_inv = int(self.inv_alphas[pos])
            num = F.mul(int(self.alphas[pos]), self._poly_eval(omega, x_inv))
            den = F.mul(int(self.w[pos]), self._poly_eval(lam_deriv, x_inv))
            if den == 0:
                raise DecodeFailure("Forney denominator vanished")
            mag = F.neg(F.div(num, den))
            if mag == 0:
                raise DecodeFailure("Forney produced a zero error magnitude")
            e[pos] = mag

        c = F.sub_arr(y, e)
        u = F.matmul(c, self.G_right_inverse, b_log=self._ginv_log)
        return u, e


class IdentityTestCode(BlockCode):
    """G = [I_k | 0], t = 0: isolates the masking layers from decoder behavior."""

    family = FAMILY_IDENTITY

    def __init__(self, field: Field, n: int, k: int):
        if not 0 < k <= n:
            raise ParameterError(f"need 0 < k <= n, got k={k}, n={n}")
        self.field = field
        self.n = n
        self.k = k
        self.t = 0
        G = np.zeros((k, n), dtype=np.int32)
        G[:, :k] = np.eye(k, dtype=np.int32)
        self.G = G
        self._G_log = field.prepare_log(G)

    def decode(self, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        y = np.asarray(y, dtype=np.int32)
        if y.shape != (self.n,):
            raise ParameterError(f"received word has shape {y.shape}, expected ({self.n},)")
        if y[self.k:].any():
            raise DecodeFailure("nonzero parity tail with t = 0")
        return y[:self.k].copy(), np.zeros(self.n, dtype=np.int32)
