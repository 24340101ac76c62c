"""Bit-exact file formats for keys and ciphertexts.

All multi-byte integers are little-endian with fixed widths; field elements
occupy one byte when q <= 256 and two bytes otherwise.  The byte-level
layout is documented in docs/FORMATS.md and pinned by golden-dump tests.
Every load re-validates what it reads: header sanity, profile balance,
block-matrix structure, permutation bijectivity, and admissibility of the
recomposed transformation.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import BinaryIO, Iterable, Iterator, Union

import numpy as np

from .channel import PolyVector
from .exceptions import FormatError, ParameterError
from .field import Field
from .keygen import PublicKey, SchemeParams, SecretKey, assemble_keypair
from .laurent import DeltaProfile, LaurentMatrix, PiMatrix
from .blockcode import FAMILY_IDENTITY, FAMILY_REED_SOLOMON

KEY_MAGIC = b"CMCE"
CIPHERTEXT_MAGIC = b"CMCT"
FORMAT_VERSION = 1
KIND_PUBLIC = 1
KIND_SECRET = 2

_FAMILY_CODES = {FAMILY_REED_SOLOMON: 1, FAMILY_IDENTITY: 2}
_FAMILY_NAMES = {v: k for k, v in _FAMILY_CODES.items()}

_KEY_PREFIX = struct.Struct("<4sBBHB")          # magic, version, kind, p, m
_KEY_PARAMS = struct.Struct("<HHBBHHH8s")       # n, k, mu, nu, t, dnum, dden, fingerprint
_CT_HEADER = struct.Struct("<4sBBHHIIQ")        # magic, version, esize, n, k, ell, frames, bytes


def _read_exact(fh: BinaryIO, size: int, what: str) -> bytes:
    buf = fh.read(size)
    if len(buf) != size:
        raise FormatError(f"truncated file while reading {what}")
    return buf


def _pack_elements(arr: np.ndarray, elem_size: int) -> bytes:
    flat = np.ascontiguousarray(arr, dtype=np.int32).reshape(-1)
    if elem_size == 1:
        return flat.astype("<u1").tobytes()
    return flat.astype("<u2").tobytes()


def _unpack_elements(buf: bytes, count: int, elem_size: int, q: int, what: str) -> np.ndarray:
    dtype = "<u1" if elem_size == 1 else "<u2"
    arr = np.frombuffer(buf, dtype=dtype, count=count).astype(np.int32)
    if arr.size and int(arr.max()) >= q:
        raise FormatError(f"{what} contains an element >= q = {q}")
    return arr


# -- key headers ----------------------------------------------------------------


@dataclass
class KeyFileHeader:
    kind: int
    field: Field
    n: int
    k: int
    mu: int
    nu: int
    t: int
    pi_density: Fraction
    seed_fingerprint: bytes

    @property
    def elem_size(self) -> int:
        return self.field.element_size


def _write_key_header(fh: BinaryIO, hdr: KeyFileHeader) -> None:
    fh.write(_KEY_PREFIX.pack(KEY_MAGIC, FORMAT_VERSION, hdr.kind,
                              hdr.field.p, hdr.field.m))
    fh.write(struct.pack(f"<{hdr.field.m + 1}H", *hdr.field.reduction_poly))
    fh.write(_KEY_PARAMS.pack(hdr.n, hdr.k, hdr.mu, hdr.nu, hdr.t,
                              hdr.pi_density.numerator, hdr.pi_density.denominator,
                              hdr.seed_fingerprint))


def _read_key_header(fh: BinaryIO) -> KeyFileHeader:
    magic, version, kind, p, m = _KEY_PREFIX.unpack(
        _read_exact(fh, _KEY_PREFIX.size, "key header"))
    if magic != KEY_MAGIC:
        raise FormatError(f"bad magic {magic!r}; not a key file")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported key format version {version}")
    if kind not in (KIND_PUBLIC, KIND_SECRET):
        raise FormatError(f"unknown key kind {kind}")
    redpoly = struct.unpack(f"<{m + 1}H",
                            _read_exact(fh, 2 * (m + 1), "reduction polynomial"))
    try:
        field = Field(p, m, redpoly)
    except ParameterError as exc:
        raise FormatError(f"invalid field parameters: {exc}") from exc
    n, k, mu, nu, t, dnum, dden, fp = _KEY_PARAMS.unpack(
        _read_exact(fh, _KEY_PARAMS.size, "key parameters"))
    if dden == 0:
        raise FormatError("density denominator is zero")
    density = Fraction(dnum, dden)
    if not 0 <= density <= 1:
        raise FormatError(f"density {density} outside [0, 1]")
    return KeyFileHeader(kind=kind, field=field, n=n, k=k, mu=mu, nu=nu, t=t,
                         pi_density=density, seed_fingerprint=fp)


# -- public keys -------------------------------------------------------------------


def write_public_key(path_or_fh: Union[str, BinaryIO], pk: PublicKey) -> None:
    hdr = KeyFileHeader(kind=KIND_PUBLIC, field=pk.field, n=pk.n, k=pk.k,
                        mu=pk.mu, nu=pk.nu, t=pk.t, pi_density=pk.pi_density,
                        seed_fingerprint=pk.seed_fingerprint)
    with _open_out(path_or_fh) as fh:
        _write_key_header(fh, hdr)
        fh.write(_pack_elements(pk.coeffs, hdr.elem_size))


def read_public_key(path_or_fh: Union[str, BinaryIO]) -> PublicKey:
    with _open_in(path_or_fh) as fh:
        hdr = _read_key_header(fh)
        if hdr.kind != KIND_PUBLIC:
            raise FormatError("expected a public key file, found a secret key")
        count = (hdr.mu + hdr.nu + 1) * hdr.k * hdr.n
        buf = _read_exact(fh, count * hdr.elem_size, "public coefficients")
        _ensure_eof(fh, "public key")
        coeffs = _unpack_elements(buf, count, hdr.elem_size, hdr.field.q,
                                  "public coefficients")
        coeffs = coeffs.reshape(hdr.mu + hdr.nu + 1, hdr.k, hdr.n)
        try:
            return PublicKey(field=hdr.field, n=hdr.n, k=hdr.k, mu=hdr.mu, nu=hdr.nu,
                             t=hdr.t, coeffs=coeffs, pi_density=hdr.pi_density,
                             seed_fingerprint=hdr.seed_fingerprint)
        except ParameterError as exc:
            raise FormatError(f"invalid public key: {exc}") from exc


# -- secret keys -------------------------------------------------------------------


def write_secret_key(path_or_fh: Union[str, BinaryIO], sk: SecretKey) -> None:
    params = sk.params
    hdr = KeyFileHeader(kind=KIND_SECRET, field=params.field, n=params.n, k=params.k,
                        mu=params.mu, nu=params.nu, t=sk.code.t,
                        pi_density=params.pi_density,
                        seed_fingerprint=sk.seed_fingerprint)
    es = hdr.elem_size
    with _open_out(path_or_fh) as fh:
        _write_key_header(fh, hdr)
        fh.write(struct.pack("<B", _FAMILY_CODES[params.family]))
        s_stack = np.stack([sk.S.coeff(params.mu + d)
                            for d in range(params.nu - params.mu + 1)])
        fh.write(_pack_elements(s_stack, es))
        fh.write(_pack_elements(sk.code.G, es))
        fh.write(np.asarray(sk.gamma, dtype="<u2").tobytes())
        fh.write(struct.pack(f"<{2 * params.mu + 1}H", *sk.profile.counts))
        fh.write(_pack_elements(sk.pi.matrix, es))


def read_secret_key(path_or_fh: Union[str, BinaryIO]) -> SecretKey:
    with _open_in(path_or_fh) as fh:
        hdr = _read_key_header(fh)
        if hdr.kind != KIND_SECRET:
            raise FormatError("expected a secret key file, found a public key")
        es = hdr.elem_size
        fam_code = struct.unpack("<B", _read_exact(fh, 1, "code family"))[0]
        family = _FAMILY_NAMES.get(fam_code)
        if family is None:
            raise FormatError(f"unknown code family code {fam_code}")

        ncoef = hdr.nu - hdr.mu + 1
        s_count = ncoef * hdr.k * hdr.k
        s_buf = _read_exact(fh, s_count * es, "scrambler coefficients")
        g_buf = _read_exact(fh, hdr.k * hdr.n * es, "generator matrix")
        gamma_buf = _read_exact(fh, 2 * hdr.n, "permutation")
        prof_buf = _read_exact(fh, 2 * (2 * hdr.mu + 1), "profile")
        pi_buf = _read_exact(fh, hdr.n * hdr.n * es, "block matrix")
        _ensure_eof(fh, "secret key")

    q = hdr.field.q
    s_stack = _unpack_elements(s_buf, s_count, es, q, "scrambler").reshape(
        ncoef, hdr.k, hdr.k)
    g_mat = _unpack_elements(g_buf, hdr.k * hdr.n, es, q, "generator").reshape(
        hdr.k, hdr.n)
    gamma = np.frombuffer(gamma_buf, dtype="<u2").astype(np.int64)
    counts = struct.unpack(f"<{2 * hdr.mu + 1}H", prof_buf)
    pi_mat = _unpack_elements(pi_buf, hdr.n * hdr.n, es, q, "block matrix").reshape(
        hdr.n, hdr.n)

    try:
        params = SchemeParams(field=hdr.field, n=hdr.n, k=hdr.k, mu=hdr.mu, nu=hdr.nu,
                              family=family, pi_density=hdr.pi_density)
        profile = DeltaProfile(hdr.mu, tuple(int(c) for c in counts))
        if profile.n != hdr.n:
            raise ParameterError("profile multiplicities do not sum to n")
        pi = PiMatrix(hdr.field, profile, pi_mat)
        S = LaurentMatrix(hdr.field, hdr.mu, s_stack)
        pk, sk = assemble_keypair(params, S, pi, profile, gamma,
                                  seed_fingerprint=hdr.seed_fingerprint)
    except ParameterError as exc:
        raise FormatError(f"invalid secret key: {exc}") from exc
    if sk.code.t != hdr.t:
        raise FormatError(f"stored t = {hdr.t} does not match the code (t = {sk.code.t})")
    if not np.array_equal(sk.code.G, g_mat):
        raise FormatError("stored generator matrix does not match the code family")
    return sk


# -- ciphertexts --------------------------------------------------------------------


@dataclass
class CiphertextHeader:
    elem_size: int
    n: int
    k: int
    ell: int
    frame_count: int
    orig_byte_len: int

    def pack(self) -> bytes:
        return _CT_HEADER.pack(CIPHERTEXT_MAGIC, FORMAT_VERSION, self.elem_size,
                               self.n, self.k, self.ell, self.frame_count,
                               self.orig_byte_len)

    @classmethod
    def unpack(cls, buf: bytes) -> "CiphertextHeader":
        magic, version, esize, n, k, ell, frames, nbytes = _CT_HEADER.unpack(buf)
        if magic != CIPHERTEXT_MAGIC:
            raise FormatError(f"bad magic {magic!r}; not a ciphertext file")
        if version != FORMAT_VERSION:
            raise FormatError(f"unsupported ciphertext format version {version}")
        if esize not in (1, 2):
            raise FormatError(f"invalid element size {esize}")
        return cls(elem_size=esize, n=n, k=k, ell=ell, frame_count=frames,
                   orig_byte_len=nbytes)

    @property
    def size(self) -> int:
        return _CT_HEADER.size


def write_ciphertext(path_or_fh: Union[str, BinaryIO], header: CiphertextHeader,
                     frames: Iterable[np.ndarray]) -> None:
    count = 0
    with _open_out(path_or_fh) as fh:
        fh.write(header.pack())
        for frame in frames:
            fh.write(_pack_elements(frame, header.elem_size))
            count += 1
    if count != header.frame_count:
        raise ParameterError(f"wrote {count} frames, header promised {header.frame_count}")


def iter_ciphertext_frames(fh: BinaryIO, header: CiphertextHeader,
                           q: int) -> Iterator[np.ndarray]:
    frame_bytes = header.n * header.elem_size
    for i in range(header.frame_count):
        buf = _read_exact(fh, frame_bytes, f"ciphertext frame {i}")
        yield _unpack_elements(buf, header.n, header.elem_size, q, f"frame {i}")


def read_ciphertext_header(fh: BinaryIO) -> CiphertextHeader:
    return CiphertextHeader.unpack(_read_exact(fh, _CT_HEADER.size, "ciphertext header"))


def read_ciphertext(path_or_fh: Union[str, BinaryIO], q: int) -> tuple[CiphertextHeader, PolyVector]:
    with _open_in(path_or_fh) as fh:
        header = read_ciphertext_header(fh)
        frames = list(iter_ciphertext_frames(fh, header, q))
        _ensure_eof(fh, "ciphertext")
    coeffs = np.stack(frames) if frames else np.zeros((0, header.n), dtype=np.int32)
    return header, PolyVector(header.n, coeffs)


# -- plaintext framing ----------------------------------------------------------------


def message_to_frames(data: bytes, k: int, field: Field) -> PolyVector:
    """Map raw bytes to k-element message frames, zero-padding the tail.

    One byte per element for q = 256 and two (little-endian) for q = 2^16;
    other field orders have no lossless byte mapping and are rejected.
    """
    es = field.element_size
    if field.q not in (256, 65536):
        raise ParameterError(f"byte framing requires q = 256 or 65536, got q = {field.q}")
    frame_bytes = k * es
    padded = len(data) + (-len(data)) % frame_bytes
    nframes = max(1, padded // frame_bytes)
    buf = data + b"\x00" * (nframes * frame_bytes - len(data))
    dtype = "<u1" if es == 1 else "<u2"
    arr = np.frombuffer(buf, dtype=dtype).astype(np.int32).reshape(nframes, k)
    return PolyVector(k, arr)


def frames_to_message(u: PolyVector, orig_byte_len: int, field: Field) -> bytes:
    es = field.element_size
    raw = _pack_elements(u.coeffs, es)
    if orig_byte_len > len(raw):
        raise FormatError(f"header claims {orig_byte_len} bytes but frames hold {len(raw)}")
    return raw[:orig_byte_len]


# -- small helpers -----------------------------------------------------------------------


class _open_out:
    def __init__(self, target: Union[str, BinaryIO]):
        self.target = target
        self.own = isinstance(target, (str, bytes))

    def __enter__(self) -> BinaryIO:
        self.fh = open(self.target, "wb") if self.own else self.target
        return self.fh

    def __exit__(self, *exc):
        if self.own:
            self.fh.close()
        return False


class _open_in:
    def __init__(self, target: Union[str, BinaryIO]):
        self.target = target
        self.own = isinstance(target, (str, bytes))

    def __enter__(self) -> BinaryIO:
        self.fh = open(self.target, "rb") if self.own else self.target
        return self.fh

    def __exit__(self, *exc):
        if self.own:
            self.fh.close()
        return False


def _ensure_eof(fh: BinaryIO, what: str) -> None:
    if fh.read(1):
        raise FormatError(f"trailing bytes after {what}")
