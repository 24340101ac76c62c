"""Key generation: mask a block code between a polynomial scrambler and a
Laurent transformation.

The public encoder is G'(D) = S(D) * G * P(D) with S(D) = sum_{i=mu}^{nu}
S_i D^i (S_mu invertible), G the inner block code generator and
P(D) = T(D,1/D)^{-1} for an admissible T.  The D^mu leading the scrambler
cancels the D^{-mu} tail of P, so G' is polynomial with degree range inside
[0, mu + nu].
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import linalg
from .blockcode import FAMILY_REED_SOLOMON, BlockCode, make_code
from .exceptions import ParameterError
from .field import Field
from .laurent import (DeltaProfile, LaurentMatrix, PiMatrix, compose_T, invert_T,
                      sample_delta, sample_permutation, sample_pi, validate_T)

DEFAULT_PI_DENSITY = Fraction(1, 2)


@dataclass(frozen=True)
class SchemeParams:
    """Everything needed to sample a key pair."""

    field: Field
    n: int
    k: int
    mu: int
    nu: int
    family: str = FAMILY_REED_SOLOMON
    pi_density: Fraction = DEFAULT_PI_DENSITY

    def __post_init__(self):
        if not 0 < self.k < self.n:
            raise ParameterError(f"need 0 < k < n, got k={self.k}, n={self.n}")
        if not 0 <= self.mu <= self.nu:
            raise ParameterError(f"need nu >= mu >= 0, got mu={self.mu}, nu={self.nu}")
        if self.family == FAMILY_REED_SOLOMON and self.field.q <= self.n:
            raise ParameterError(f"Reed-Solomon needs q > n, got q={self.field.q}, n={self.n}")
        density = Fraction(self.pi_density)
        if not 0 <= density <= 1:
            raise ParameterError(f"pi density must lie in [0, 1], got {density}")
        object.__setattr__(self, "pi_density", density)

    def code(self) -> BlockCode:
        return make_code(self.family, self.field, self.n, self.k)

    @property
    def t(self) -> int:
        return self.code().t


def reference_params() -> SchemeParams:
    """F_256, RS[32,16] (t = 8), mu = 2, nu = 6."""
    return SchemeParams(Field(2, 8), n=32, k=16, mu=2, nu=6)


def small_params() -> SchemeParams:
    """F_8, RS[7,3] (t = 2), mu = 1, nu = 3."""
    return SchemeParams(Field(2, 3), n=7, k=3, mu=1, nu=3)


@dataclass
class PublicKey:
    """Published encoder coefficients plus the sender's error contract.

    ``coeffs[d]`` is the k x n coefficient of D^d for d = 0..mu+nu (slots
    outside the actual degree range stay zero).  mu is published because the
    sender cannot shape admissible error windows without it.
    """

    field: Field
    n: int
    k: int
    mu: int
    nu: int
    t: int
    coeffs: np.ndarray
    pi_density: Fraction = DEFAULT_PI_DENSITY
    seed_fingerprint: bytes = b"\x00" * 8

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.int32)
        expected = (self.mu + self.nu + 1, self.k, self.n)
        if self.coeffs.shape != expected:
            raise ParameterError(f"coefficient stack shape {self.coeffs.shape} != {expected}")

    def generator(self) -> LaurentMatrix:
        return LaurentMatrix(self.field, 0, self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, PublicKey) and self.field == other.field
                and (self.n, self.k, self.mu, self.nu, self.t) ==
                    (other.n, other.k, other.mu, other.nu, other.t)
                and self.pi_density == other.pi_density
                and self.seed_fingerprint == other.seed_fingerprint
                and np.array_equal(self.coeffs, other.coeffs))


@dataclass
class SecretKey:
    """Scrambler S(D), inner code, and the factored transformation.

    P(D) = T^{-1} is cached in expanded form so decryption is self-contained;
    the factors (Pi, profile, Gamma) are the canonical secret and are what
    gets serialized.  T is recomposed from them and revalidated on load.
    """

    params: SchemeParams
    S: LaurentMatrix
    code: BlockCode
    pi: PiMatrix
    profile: DeltaProfile
    gamma: np.ndarray
    P: LaurentMatrix
    T: LaurentMatrix
    seed_fingerprint: bytes = b"\x00" * 8
    _s_mu_inv: Optional[np.ndarray] = dc_field(default=None, repr=False)

    @property
    def s_mu_inv(self) -> np.ndarray:
        if self._s_mu_inv is None:
            self._s_mu_inv = linalg.matrix_inverse(self.params.field,
                                                   self.S.coeff(self.params.mu))
        return self._s_mu_inv

    def __eq__(self, other):
        return (isinstance(other, SecretKey) and self.params == other.params
                and self.S == other.S and self.code == other.code
                and self.profile == other.profile
                and np.array_equal(self.pi.matrix, other.pi.matrix)
                and np.array_equal(self.gamma, other.gamma)
                and self.seed_fingerprint == other.seed_fingerprint)


def sample_S(params: SchemeParams, rng: np.random.Generator) -> LaurentMatrix:
    """Scrambler with uniformly random invertible S_mu and uniform S_i above."""
    k, q = params.k, params.field.q
    ncoef = params.nu - params.mu + 1
    coeffs = np.empty((ncoef, k, k), dtype=np.int32)
    coeffs[0] = linalg.random_invertible_matrix(params.field, rng, k)
    for i in range(1, ncoef):
        coeffs[i] = rng.integers(0, q, size=(k, k), dtype=np.int32)
    return LaurentMatrix(params.field, params.mu, coeffs)


def assemble_keypair(params: SchemeParams, S: LaurentMatrix, pi: PiMatrix,
                     profile: DeltaProfile, gamma: np.ndarray,
                     seed_fingerprint: bytes = b"\x00" * 8) -> tuple[PublicKey, SecretKey]:
    """Build the key pair from explicit components (used by keygen and tests)."""
    field = params.field
    code = params.code()
    T = compose_T(pi, profile, gamma)
    violations = validate_T(T)
    if violations:
        raise ParameterError("composed transformation is inadmissible: "
                             + "; ".join(str(v) for v in violations))
    P = invert_T(pi, profile, gamma)

    G_const = LaurentMatrix.constant(field, code.G)
    Gp = S.mul(G_const).mul(P)
    if not Gp.is_zero() and (Gp.low < 0 or Gp.high > params.mu + params.nu):
        raise AssertionError("public generator degrees escaped [0, mu+nu]; "
                             "the masking algebra is broken")
    coeffs = np.zeros((params.mu + params.nu + 1, params.k, params.n), dtype=np.int32)
    if not Gp.is_zero():
        coeffs[Gp.low:Gp.high + 1] = Gp.coeffs

    pk = PublicKey(field=field, n=params.n, k=params.k, mu=params.mu, nu=params.nu,
                   t=code.t, coeffs=coeffs, pi_density=params.pi_density,
                   seed_fingerprint=seed_fingerprint)
    sk = SecretKey(params=params, S=S, code=code, pi=pi, profile=profile, gamma=gamma,
                   P=P, T=T, seed_fingerprint=seed_fingerprint)
    return pk, sk


def keygen(params: SchemeParams, rng: np.random.Generator,
           seed_fingerprint: bytes = b"\x00" * 8) -> tuple[PublicKey, SecretKey]:
    """Sample a key pair: scrambler, profile, block matrix, permutation."""
    S = sample_S(params, rng)
    profile = sample_delta(params.n, params.mu, rng)
    pi = sample_pi(params.field, profile, rng, float(params.pi_density))
    gamma = sample_permutation(params.n, rng)
    return assemble_keypair(params, S, pi, profile, gamma, seed_fingerprint)


def sliding_generator(pk: PublicKey, ell: int) -> np.ndarray:
    """Block-Toeplitz matrix mapping (u_0..u_ell) to (y_0..y_{ell+mu+nu}):
    block row i holds G'_0..G'_{mu+nu} starting at block column i."""
    if ell < 0:
        raise ParameterError("ell must be >= 0")
    k, n, span = pk.k, pk.n, pk.mu + pk.nu + 1
    out = np.zeros((k * (ell + 1), n * (ell + 1 + pk.mu + pk.nu)), dtype=np.int32)
    for i in range(ell + 1):
        out[i * k:(i + 1) * k, i * n:(i + span) * n] = \
            np.concatenate(list(pk.coeffs), axis=1)
    return out


def truncated_generator(pk: PublicKey, s: int) -> np.ndarray:
    """Upper-triangular block matrix G'_{j-i} in block (i, j), 0 <= i, j <= s;
    it governs the first s+1 ciphertext coefficients and is generally not of
    full row rank."""
    if s < 0:
        raise ParameterError("s must be >= 0")
    k, n = pk.k, pk.n
    out = np.zeros((k * (s + 1), n * (s + 1)), dtype=np.int32)
    for i in range(s + 1):
        for j in range(i, min(s, i + pk.mu + pk.nu) + 1):
            out[i * k:(i + 1) * k, j * n:(j + 1) * n] = pk.coeffs[j - i]
    return out
