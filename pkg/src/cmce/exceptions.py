"""Exception hierarchy shared across the package."""


class CmceError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(CmceError, ValueError):
    """Invalid parameters or a violated usage contract (caller bug)."""


class FormatError(CmceError, ValueError):
    """A key or ciphertext file failed to parse or validate."""


class DecodeFailure(CmceError):
    """The block decoder found no codeword within its error capability."""


class StreamDecodeError(DecodeFailure):
    """Block decoding failed at a specific time index of a ciphertext stream."""

    def __init__(self, time_index: int, message: str = ""):
        self.time_index = time_index
        super().__init__(message or f"block decode failed at time index {time_index}")


class FramingWarning(UserWarning):
    """A coefficient outside the message range did not decode to zero."""
