"""Exception types shared across the package.

Everything derives from BadicNetsError; guard violations (desk-scale size
caps) additionally derive from GuardExceeded so the CLI can map them to a
distinct exit code.
"""


class BadicNetsError(Exception):
    """Base class for all library errors."""


class GuardExceeded(BadicNetsError, ValueError):
    """A desk-scale resource guard would be exceeded."""


class TooLarge(GuardExceeded):
    """Requested size is beyond the supported desk scale."""


class PrecisionExhausted(GuardExceeded):
    """A sequence was evaluated beyond its certified validity range."""


class NotPrime(BadicNetsError, ValueError):
    """Field characteristic must be prime."""


class FieldMismatch(BadicNetsError, ValueError):
    """Operands belong to different fields."""


class NotBAdicInteger(BadicNetsError, ValueError):
    """u/v with gcd(v, b) != 1 has no b-adic integer expansion."""


class BaseMismatch(BadicNetsError, ValueError):
    """Digit streams with different bases cannot be combined."""


class NotAUnit(BadicNetsError, ValueError):
    """Stream is not invertible in the b-adic integers."""


class DepthExceeded(BadicNetsError, ValueError):
    """A matrix row beyond the declared depth was requested."""


class SchemaError(BadicNetsError, ValueError):
    """A file does not match its documented schema."""


class EntryOutOfRange(SchemaError):
    """Matrix entry is not a valid field element index."""


class ConventionRejected(BadicNetsError, ValueError):
    """No candidate matrix convention passed the rank self-check."""


class SizeMismatch(BadicNetsError, ValueError):
    """Point set size does not match the declared block size."""


class OutOfRange(BadicNetsError, ValueError):
    """A point lies outside the unit cube."""


class UnsupportedBase(BadicNetsError, ValueError):
    """The closed-form discrepancy bound is only quoted for b > 2."""


class InvalidT(BadicNetsError, ValueError):
    """Quality parameter t out of range (need 0 <= t <= m)."""


class ProfileTooShort(BadicNetsError, ValueError):
    """Quality profile does not cover the required precision range."""


class ExactValueUnavailable(BadicNetsError, ValueError):
    """Exact full-precision point values are not computable for this setup."""


class SpecGrammarError(BadicNetsError, ValueError):
    """A sequence specification string could not be parsed."""


class BoundViolation(BadicNetsError):
    """An exact value exceeded its proven bound (should never happen)."""
