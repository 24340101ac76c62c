"""Encryption and sequential decryption.

Encryption is the convolution y(D) = u(D) G'(D) + e(D).  Decryption
multiplies the received stream by T(D, 1/D) on the right, block-decodes
each descrambled coefficient, and unwinds the scrambler by back
substitution against the invertible leading coefficient S_mu -- never
materializing anything whose size grows with the message length, so a
stream of any length decodes in constant memory and O(n^2 * mu) work per
coefficient.
"""

from __future__ import annotations

import warnings
from typing import Optional

import numpy as np

from .channel import PolyVector, validate_error
from .exceptions import (DecodeFailure, FramingWarning, ParameterError,
                         StreamDecodeError)
from .keygen import PublicKey, SecretKey
from .laurent import stream_times_matrix


def encrypt(pk: PublicKey, u: PolyVector, e: PolyVector) -> PolyVector:
    """y(D) = u(D) G'(D) + e(D); e must honor the sliding-window contract."""
    if u.width != pk.k:
        raise ParameterError(f"message width {u.width} != k = {pk.k}")
    if e.width != pk.n:
        raise ParameterError(f"error width {e.width} != n = {pk.n}")
    ell = u.num_coeffs - 1
    if ell < 0:
        raise ParameterError("message must have at least one coefficient")
    span = ell + pk.mu + pk.nu + 1
    if e.num_coeffs > span:
        raise ParameterError(f"error degree {e.num_coeffs - 1} exceeds ell + mu + nu = {span - 1}")
    bad = validate_error(e, pk.t, pk.mu)
    if bad is not None:
        raise ParameterError(f"error pattern violates the window contract at window {bad}")

    out, low = stream_times_matrix(pk.field, u.coeffs, pk.generator())
    y = np.zeros((span, pk.n), dtype=np.int32)
    y[low:low + out.shape[0]] = out
    y[:e.num_coeffs] = pk.field.add_arr(y[:e.num_coeffs], e.coeffs)
    return PolyVector(pk.n, y)


class StreamDecryptor:
    """Sequential decoder; one instance per ciphertext stream.

    Feed ciphertext coefficients in time order with push(); each call
    returns the newly recovered message coefficients (none during the
    initial 2*mu-step latency).  finish() drains the pipeline once the
    stream ends.  When the message length is known up front, pass
    ``ell``: trailing coefficients are then verified to be zero instead
    of emitted, and any nonzero residue raises a FramingWarning.
    """

    def __init__(self, sk: SecretKey, ell: Optional[int] = None):
        params = sk.params
        self.field = params.field
        self.code = sk.code
        self.mu = params.mu
        self.nu = params.nu
        self.k = params.k
        self.n = params.n
        self.ell = ell

        # Static matrices in log form; T may have fewer than 2*mu+1 taps.
        F = self.field
        self._taps = [(sk.T.low + i, F.prepare_log(sk.T.coeffs[i]))
                      for i in range(sk.T.coeffs.shape[0])
                      if sk.T.coeffs[i].any()]
        span = self.nu - self.mu
        self._s_logs = [F.prepare_log(sk.S.coeff(params.mu + d)) for d in range(1, span + 1)]
        self._s_mu_inv_log = F.prepare_log(sk.s_mu_inv)

        self._ywin = np.zeros((2 * self.mu + 1, self.n), dtype=np.int32)
        self._uwin = np.zeros((max(span, 1), self.k), dtype=np.int32)
        self._next_y = 0          # index of the next ciphertext coefficient
        self._emitted = 0         # message coefficients recovered so far
        self._finished = False

        self.laurent_mults = 0
        self.backsub_mults = 0
        self.decode_calls = 0
        self.max_step_laurent_mults = 0
        self.max_step_backsub_mults = 0
        self.max_block_error_weight = 0
        self.framing_anomalies: list[int] = []

    # -- internals ------------------------------------------------------------

    def _y_at(self, idx: int) -> Optional[np.ndarray]:
        if idx < 0 or idx >= self._next_y:
            return None
        return self._ywin[idx % self._ywin.shape[0]]

    def _descramble(self, j: int) -> np.ndarray:
        """yhat_j = sum_i y_{j-i} T_i over the available window."""
        F = self.field
        acc = np.zeros(self.n, dtype=np.int32)
        step_mults = 0
        for shift, tap_log in self._taps:
            y = self._y_at(j - shift)
            if y is None:
                continue
            acc = F.add_arr(acc, F.matmul(y, None, b_log=tap_log))
            step_mults += self.n * self.n
        self.laurent_mults += step_mults
        self.max_step_laurent_mults = max(self.max_step_laurent_mults, step_mults)
        return acc

    def _advance(self, j: int) -> list[np.ndarray]:
        """Decode yhat_j; recover u_{j-mu} when j >= mu."""
        F = self.field
        yhat = self._descramble(j)
        try:
            uhat, ehat = self.code.decode(yhat)
        except DecodeFailure as exc:
            raise StreamDecodeError(j, f"block decode failed at time index {j}: {exc}") from exc
        self.decode_calls += 1
        self.max_block_error_weight = max(self.max_block_error_weight,
                                          int((ehat != 0).sum()))
        if j < self.mu:
            # Pure-error coefficient ahead of the first scrambled message term.
            if uhat.any():
                self.framing_anomalies.append(j)
                warnings.warn(f"leading coefficient {j} decoded to a nonzero message",
                              FramingWarning, stacklevel=3)
            return []

        step_mults = 0
        acc = uhat
        idx = j - self.mu
        span = self.nu - self.mu
        for d in range(1, min(idx, span) + 1):
            prev = self._uwin[(idx - d) % self._uwin.shape[0]]
            acc = F.sub_arr(acc, F.matmul(prev, None, b_log=self._s_logs[d - 1]))
            step_mults += self.k * self.k
        u = F.matmul(acc, None, b_log=self._s_mu_inv_log)
        step_mults += self.k * self.k
        self.backsub_mults += step_mults
        self.max_step_backsub_mults = max(self.max_step_backsub_mults, step_mults)

        self._uwin[idx % self._uwin.shape[0]] = u
        self._emitted += 1
        if self.ell is not None and idx > self.ell:
            if u.any():
                self.framing_anomalies.append(j)
                warnings.warn(f"trailing message coefficient {idx} is nonzero",
                              FramingWarning, stacklevel=3)
            return []
        return [u]

    # -- public surface ----------------------------------------------------------

    def push(self, y_coeff: np.ndarray) -> list[np.ndarray]:
        """Feed the next ciphertext coefficient; returns recovered messages."""
        if self._finished:
            raise ParameterError("stream already finished")
        y_coeff = np.asarray(y_coeff, dtype=np.int32)
        if y_coeff.shape != (self.n,):
            raise ParameterError(f"ciphertext coefficient has shape {y_coeff.shape}, "
                                 f"expected ({self.n},)")
        self._ywin[self._next_y % self._ywin.shape[0]] = y_coeff
        self._next_y += 1
        return self._advance(self._next_y - 1 - self.mu)

    def finish(self) -> list[np.ndarray]:
        """Drain the final windows once the stream has ended."""
        if self._finished:
            raise ParameterError("stream already finished")
        self._finished = True
        out = []
        last = self._next_y - 1
        for j in range(self._next_y - self.mu, last + self.mu + 1):
            out.extend(self._advance(j))
        return out


def decrypt(sk: SecretKey, y: PolyVector) -> PolyVector:
    """Whole-sequence convenience wrapper around StreamDecryptor."""
    params = sk.params
    if y.width != params.n:
        raise ParameterError(f"ciphertext width {y.width} != n = {params.n}")
    ell = y.num_coeffs - 1 - params.mu - params.nu
    if ell < 0:
        raise ParameterError(f"ciphertext needs at least mu + nu + 1 = "
                             f"{params.mu + params.nu + 1} coefficients")
    dec = StreamDecryptor(sk, ell=ell)
    recovered: list[np.ndarray] = []
    for coeff in y.coeffs:
        recovered.extend(dec.push(coeff))
    recovered.extend(dec.finish())
    if len(recovered) != ell + 1:
        raise AssertionError(f"recovered {len(recovered)} coefficients, expected {ell + 1}")
    return PolyVector(params.k, np.stack(recovered))
