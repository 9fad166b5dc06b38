"""Exception types raised across the package."""


class InfoMatError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(InfoMatError, ValueError):
    pass


class InsufficientSamplesError(InfoMatError, ValueError):
    pass


class NotPositiveDefiniteError(InfoMatError, ValueError):
    """Cholesky factorization failed; ``pivot`` is the 0-based failing index."""

    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class FormatError(InfoMatError, ValueError):
    """Malformed file; ``offset`` is the byte offset where parsing failed."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class TruncatedFileError(FormatError):
    pass


class ConfigurationError(InfoMatError, ValueError):
    pass


class InvalidModelError(InfoMatError, ValueError):
    pass


class InvalidPolicyError(InfoMatError, ValueError):
    pass


class ResourceLimitError(InfoMatError, MemoryError):
    pass
