"""Exception types shared across the library.

Everything raised on purpose derives from TracelabError, so callers (and the
command-line driver) can distinguish parameter/usage problems from genuine
bugs.
"""


class TracelabError(Exception):
    """Base class for all library-specific errors."""


class NotPrime(TracelabError):
    """Modulus is not a prime number."""


class TooLarge(TracelabError):
    """Requested table exceeds the configured size cap."""


class ZeroInverse(TracelabError):
    """Inverse of 0 requested."""


class ZeroLog(TracelabError):
    """Discrete log of 0 requested."""


class FieldMismatch(TracelabError):
    """Operands live over different prime fields."""


class OracleTooLarge(TracelabError):
    """Brute-force oracle invoked outside its cost guard."""


class BadDivisibility(TracelabError):
    """A required divisibility constraint fails (e.g. n1 | rc)."""


class BadParam(TracelabError):
    """Parameter outside the operation's domain."""


class TableTooSmall(TracelabError):
    """An eigenvalue table does not cover the requested range."""


class OutOfRange(TracelabError):
    """Index or cutoff outside the available range."""


class CacheCorrupt(TracelabError):
    """Cache file failed its magic or checksum validation."""


class CacheVersion(TracelabError):
    """Cache file was written with an unsupported format version."""
