"""Streaming McEliece-style public-key encryption from convolutional codes.

A secret block code is hidden between a polynomial scrambler S(D) and the
inverse of a Laurent masking transformation T(D, 1/D); the published object
is the polynomial convolutional encoder G'(D) = S(D) G T^{-1}.  Messages
are coefficient streams, errors obey a sliding-window weight contract, and
decryption runs sequentially with constant memory.  The analysis module
quantifies the key space and the cost of information-set-decoding attacks.
"""

from .analysis import (AttackReport, SternParams, count_S_keys, keyspace_report,
                       stern_attack_report, stern_search_time,
                       stern_success_probability, truncated_error_budget,
                       truncated_rank, truncated_recovery_probability)
from .blockcode import (FAMILY_IDENTITY, FAMILY_REED_SOLOMON, BlockCode,
                        IdentityTestCode, ReedSolomonCode, make_code)
from .channel import PolyVector, sample_error, validate_error
from .exceptions import (CmceError, DecodeFailure, FormatError, FramingWarning,
                         ParameterError, StreamDecodeError)
from .field import Field, FieldElement
from .keygen import (PublicKey, SchemeParams, SecretKey, assemble_keypair, keygen,
                     reference_params, sample_S, sliding_generator, small_params,
                     truncated_generator)
from .laurent import (DeltaProfile, LaurentMatrix, PiMatrix, Violation, compose_T,
                      count_U, count_delta, enumerate_delta_profiles, invert_T,
                      partition_count, sample_delta, sample_permutation, sample_pi,
                      validate_T)
from .pkc import StreamDecryptor, decrypt, encrypt

__version__ = "0.1.0"

__all__ = [
    "AttackReport", "BlockCode", "CmceError", "DecodeFailure", "DeltaProfile",
    "FAMILY_IDENTITY", "FAMILY_REED_SOLOMON", "Field", "FieldElement",
    "FormatError", "FramingWarning", "IdentityTestCode", "LaurentMatrix",
    "ParameterError", "PiMatrix", "PolyVector", "PublicKey", "ReedSolomonCode",
    "SchemeParams", "SecretKey", "SternParams", "StreamDecodeError",
    "StreamDecryptor", "Violation", "assemble_keypair", "compose_T",
    "count_S_keys", "count_U", "count_delta", "decrypt", "encrypt",
    "enumerate_delta_profiles", "invert_T", "keygen", "keyspace_report",
    "make_code", "partition_count", "reference_params", "sample_S",
    "sample_delta", "sample_error", "sample_permutation", "sample_pi",
    "sliding_generator", "small_params", "stern_attack_report",
    "stern_search_time", "stern_success_probability", "truncated_error_budget",
    "truncated_generator", "truncated_rank", "truncated_recovery_probability",
    "validate_T", "validate_error",
]
