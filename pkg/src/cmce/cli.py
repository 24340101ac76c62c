"""Command-line front end: keygen, encrypt, decrypt, analyze, inspect.

The CLI is a thin shell over the library; every operation it performs is
available programmatically.  Exit codes: 0 ok, 2 usage error, 3 file-format
error, 4 decode failure.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from fractions import Fraction
from typing import Optional

import numpy as np

from . import formats
from .analysis import (SternParams, keyspace_report, log2_fraction,
                       stern_attack_report, truncated_rank,
                       truncated_recovery_probability)
from .blockcode import FAMILY_IDENTITY, FAMILY_REED_SOLOMON
from .channel import PolyVector, sample_error
from .exceptions import CmceError, DecodeFailure, FormatError, ParameterError
from .field import Field
from .keygen import PublicKey, SchemeParams, keygen
from .pkc import StreamDecryptor, encrypt

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_DECODE = 4

SEED_ENV_VAR = "CMCE_SEED"


def _resolve_seed(value: Optional[str]) -> Optional[int]:
    """Flag wins over the CMCE_SEED environment variable; None means entropy."""
    if value is None:
        value = os.environ.get(SEED_ENV_VAR)
    if value is None:
        return None
    try:
        return int(value, 0)
    except ValueError as exc:
        raise ParameterError(f"seed must be an integer, got {value!r}") from exc


def _seeded_rng(seed: Optional[int]) -> tuple[np.random.Generator, bytes]:
    if seed is None:
        seed = int.from_bytes(os.urandom(8), "little")
    fingerprint = hashlib.sha256(str(seed).encode()).digest()[:8]
    return np.random.default_rng(seed), fingerprint


def _build_field(args) -> Field:
    if args.q is not None:
        if args.p is not None or args.m is not None:
            raise ParameterError("give either --q or --p/--m, not both")
        return Field.from_order(args.q, args.redpoly)
    if args.p is None:
        raise ParameterError("field unspecified: use --q or --p [--m] [--redpoly]")
    return Field(args.p, args.m if args.m is not None else 1, args.redpoly)


def _parse_redpoly(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError as exc:
        raise ParameterError(f"reduction polynomial must be comma-separated "
                             f"integers, got {text!r}") from exc


def _parse_density(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"invalid density {text!r}") from exc


def _params_from_args(args) -> SchemeParams:
    field = _build_field(args)
    nu = args.nu if args.nu is not None else args.mu + 4
    return SchemeParams(field=field, n=args.n, k=args.k, mu=args.mu, nu=nu,
                        family=args.family, pi_density=args.density)


def _add_param_flags(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--q", type=int, help="field order q = p^m")
    p.add_argument("--p", type=int, help="field characteristic")
    p.add_argument("--m", type=int, help="extension degree")
    p.add_argument("--redpoly", type=_parse_redpoly,
                   help="reduction polynomial coefficients c0,c1,...,cm (monic)")
    p.add_argument("-n", type=int, required=required, help="block length")
    p.add_argument("-k", type=int, required=required, help="block dimension")
    p.add_argument("--mu", type=int, default=2, help="window radius of the masking "
                   "transformation (default 2)")
    p.add_argument("--nu", type=int, default=None,
                   help="top scrambler degree (default mu + 4)")
    p.add_argument("--density", type=_parse_density, default=Fraction(1, 2),
                   help="above-diagonal fill probability of the block matrix "
                   "(fraction, default 1/2)")
    p.add_argument("--family", choices=[FAMILY_REED_SOLOMON, FAMILY_IDENTITY],
                   default=FAMILY_REED_SOLOMON, help="inner code family")


# -- subcommands ------------------------------------------------------------------


def _cmd_keygen(args) -> int:
    params = _params_from_args(args)
    rng, fingerprint = _seeded_rng(_resolve_seed(args.seed))
    pk, sk = keygen(params, rng, seed_fingerprint=fingerprint)
    pk_path = args.out + ".pk"
    sk_path = args.out + ".sk"
    for path in (pk_path, sk_path):
        if os.path.exists(path) and not args.force:
            raise ParameterError(f"{path} exists; pass --force to overwrite")
    formats.write_public_key(pk_path, pk)
    formats.write_secret_key(sk_path, sk)
    print(f"wrote {pk_path} ({os.path.getsize(pk_path)} bytes) and "
          f"{sk_path} ({os.path.getsize(sk_path)} bytes)")
    return EXIT_OK


def _cmd_encrypt(args) -> int:
    pk = formats.read_public_key(args.key)
    with open(args.infile, "rb") as fh:
        data = fh.read()
    u = formats.message_to_frames(data, pk.k, pk.field)
    ell = u.num_coeffs - 1
    rng, _ = _seeded_rng(_resolve_seed(args.error_seed))
    e = sample_error(pk.field, ell + pk.mu + pk.nu, pk.n, pk.t, pk.mu, rng,
                     load=args.error_load)
    y = encrypt(pk, u, e)
    header = formats.CiphertextHeader(elem_size=pk.field.element_size, n=pk.n, k=pk.k,
                                      ell=ell, frame_count=y.num_coeffs,
                                      orig_byte_len=len(data))
    formats.write_ciphertext(args.outfile, header, y.coeffs)
    print(f"wrote {args.outfile} ({os.path.getsize(args.outfile)} bytes, "
          f"{y.num_coeffs} frames)")
    return EXIT_OK


def _cmd_decrypt(args) -> int:
    sk = formats.read_secret_key(args.key)
    params = sk.params
    with open(args.infile, "rb") as fh:
        header = formats.read_ciphertext_header(fh)
        if header.n != params.n or header.k != params.k:
            raise FormatError(f"ciphertext is for an (n={header.n}, k={header.k}) key, "
                              f"this key has (n={params.n}, k={params.k})")
        if header.elem_size != params.field.element_size:
            raise FormatError("ciphertext element size does not match the key's field")
        expected = header.ell + params.mu + params.nu + 1
        if header.frame_count != expected:
            raise FormatError(f"frame count {header.frame_count} != ell + mu + nu + 1 "
                              f"= {expected}")
        dec = StreamDecryptor(sk, ell=header.ell)
        out_bytes = 0
        with open(args.outfile, "wb") as out:
            def emit(frames) -> int:
                written = 0
                for u in frames:
                    chunk = formats._pack_elements(u, header.elem_size)
                    remaining = header.orig_byte_len - out_bytes - written
                    out.write(chunk[:max(0, remaining)])
                    written += len(chunk)
                return written

            for frame in formats.iter_ciphertext_frames(fh, header, params.field.q):
                out_bytes += emit(dec.push(frame))
            out_bytes += emit(dec.finish())
        formats._ensure_eof(fh, "ciphertext")
    print(f"wrote {args.outfile} ({os.path.getsize(args.outfile)} bytes)")
    return EXIT_OK


def _analysis_pairs(params_label: str, pk: PublicKey, params: SchemeParams, args,
                    sp: SternParams) -> list[tuple[str, str]]:
    pairs: list[tuple[str, str]] = [("params", params_label)]
    pairs.extend(keyspace_report(params).as_pairs())

    report = stern_attack_report(params.n, params.k, args.ell, params.mu, params.nu,
                                 pk.t, sp)
    pairs += [
        ("stern.ell", str(args.ell)),
        ("stern.p", str(sp.p)),
        ("stern.m", str(sp.m)),
        ("stern.success_probability", str(report.success_probability)),
        ("stern.success_probability_log2", f"{report.success_probability_log2:.6f}"),
        ("stern.search_time_log2", f"{log2_fraction(report.per_iteration_cost):.6f}"),
        ("stern.work_factor_log2", f"{report.work_factor_log2:.6f}"),
    ]
    model = sp if args.model == "stern" else "prange"
    for s in args.s:
        k_s, t_s = truncated_rank(pk, s)
        prob = truncated_recovery_probability(pk, s, model)
        pairs += [
            (f"truncated.s{s}.rank", str(k_s)),
            (f"truncated.s{s}.full_rank", str(pk.k * (s + 1))),
            (f"truncated.s{s}.error_budget", str(t_s)),
            (f"truncated.s{s}.recovery_probability_log2", f"{log2_fraction(prob):.6f}"),
        ]
    return pairs


def _cmd_analyze(args) -> int:
    sp = SternParams(p=args.stern_p, m=args.stern_m)
    if args.key is not None:
        pk = formats.read_public_key(args.key)
        family = FAMILY_REED_SOLOMON if pk.field.q > pk.n else FAMILY_IDENTITY
        params = SchemeParams(field=pk.field, n=pk.n, k=pk.k, mu=pk.mu, nu=pk.nu,
                              family=family, pi_density=pk.pi_density)
        label = (f"key={os.path.basename(args.key)} q={pk.field.q} n={pk.n} k={pk.k} "
                 f"mu={pk.mu} nu={pk.nu} t={pk.t}")
    else:
        if args.n is None or args.k is None:
            raise ParameterError("analyze needs --key or -n/-k parameters")
        params = _params_from_args(args)
        rng, _ = _seeded_rng(_resolve_seed(args.seed) or 0)
        pk, _sk = keygen(params, rng)
        label = (f"sampled q={params.field.q} n={params.n} k={params.k} "
                 f"mu={params.mu} nu={params.nu} t={pk.t} seed={_resolve_seed(args.seed) or 0}")

    pairs = _analysis_pairs(label, pk, params, args, sp)
    if args.format == "kv":
        for key, value in pairs:
            print(f"{key}={value}")
    else:
        width = max(len(k) for k, _ in pairs)
        print(f"security analysis: {label}")
        for key, value in pairs:
            print(f"  {key:<{width}}  {value}")

    if args.plot_dir:
        from .plots import render_analysis_figures
        ells = sorted({1, 2, 4, 8, 16, 32, 64, max(1, args.ell)})
        paths = render_analysis_figures(args.plot_dir, n=params.n, k=params.k,
                                        mu=params.mu, nu=params.nu, t=pk.t, sp=sp,
                                        ells=ells, pk=pk, s_values=args.s,
                                        model=sp if args.model == "stern" else "prange")
        for path in paths:
            print(f"figure: {path}", file=sys.stderr)
    return EXIT_OK


def _cmd_inspect(args) -> int:
    with open(args.infile, "rb") as fh:
        magic = fh.read(4)
        fh.seek(0)
        if magic == formats.KEY_MAGIC:
            hdr = formats._read_key_header(fh)
            kind = "public" if hdr.kind == formats.KIND_PUBLIC else "secret"
            print(f"kind: {kind} key")
            print(f"field: q = {hdr.field.q} (p = {hdr.field.p}, m = {hdr.field.m}, "
                  f"reduction polynomial = {list(hdr.field.reduction_poly)})")
            print(f"code: n = {hdr.n}, k = {hdr.k}, t = {hdr.t}")
            print(f"masking: mu = {hdr.mu}, nu = {hdr.nu}, density = {hdr.pi_density}")
            print(f"seed fingerprint: {hdr.seed_fingerprint.hex()}")
        elif magic == formats.CIPHERTEXT_MAGIC:
            hdr = formats.read_ciphertext_header(fh)
            print("kind: ciphertext")
            print(f"frames: {hdr.frame_count} of {hdr.n} elements "
                  f"({hdr.elem_size} byte(s) each)")
            print(f"message: ell = {hdr.ell} ({hdr.ell + 1} frames of {hdr.k}), "
                  f"{hdr.orig_byte_len} payload bytes")
        else:
            raise FormatError(f"unrecognized magic {magic!r}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmce",
        description="Streaming McEliece-style encryption from convolutional codes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a key pair")
    _add_param_flags(p, required=True)
    p.add_argument("--seed", help=f"RNG seed (fallback: ${SEED_ENV_VAR})")
    p.add_argument("--out", required=True, help="output prefix for <prefix>.pk/.sk")
    p.add_argument("--force", action="store_true", help="overwrite existing key files")
    p.set_defaults(func=_cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt a file")
    p.add_argument("--key", required=True, help="public key file (.pk)")
    p.add_argument("--in", dest="infile", required=True, help="plaintext input file")
    p.add_argument("--out", dest="outfile", required=True, help="ciphertext output file")
    p.add_argument("--error-seed", help=f"error RNG seed (fallback: ${SEED_ENV_VAR})")
    p.add_argument("--error-load", type=float, default=0.5,
                   help="fraction of the window budget the sampler may spend (default 0.5)")
    p.set_defaults(func=_cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a file")
    p.add_argument("--key", required=True, help="secret key file (.sk)")
    p.add_argument("--in", dest="infile", required=True, help="ciphertext input file")
    p.add_argument("--out", dest="outfile", required=True, help="plaintext output file")
    p.set_defaults(func=_cmd_decrypt)

    p = sub.add_parser("analyze", help="key-space and attack-cost report")
    p.add_argument("--key", help="public key file (.pk)")
    _add_param_flags(p, required=False)
    p.add_argument("--seed", help="seed for the sampled key when only parameters are given")
    p.add_argument("--ell", type=int, default=128, help="message length for the "
                   "whole-sequence attack (default 128)")
    p.add_argument("--stern-p", type=int, default=4, help="Stern weight guess p (default 4)")
    p.add_argument("--stern-m", type=int, default=16,
                   help="Stern zero-window length m (default 16)")
    p.add_argument("--s", type=lambda s: [int(x) for x in s.split(",")],
                   default=[1, 2, 4, 8], help="comma-separated truncation prefixes "
                   "(default 1,2,4,8)")
    p.add_argument("--model", choices=["prange", "stern"], default="prange",
                   help="ISD model for the truncated analysis (default prange)")
    p.add_argument("--format", choices=["text", "kv"], default="text",
                   help="output style (default text)")
    p.add_argument("--plot-dir", help="also render figures into this directory")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("inspect", help="print a file's header summary")
    p.add_argument("--in", dest="infile", required=True, help="key or ciphertext file")
    p.set_defaults(func=_cmd_inspect)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except DecodeFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DECODE
    except (ParameterError, CmceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
