"""Exception hierarchy shared by every module."""


class FqGraphError(Exception):
    """Base class for all library errors."""


class ConfigError(FqGraphError, ValueError):
    """Invalid user-supplied parameters."""


class DegeneracyError(FqGraphError, ArithmeticError):
    """A mathematically degenerate configuration (empty sphere, zero normalizer)."""


class NotOddPrime(ConfigError):
    pass


class ZeroArgument(ConfigError):
    pass


class ZeroVector(ConfigError):
    pass


class DimensionMismatch(ConfigError):
    pass


class BadExponent(ConfigError):
    pass


class ArityMismatch(ConfigError):
    pass


class UnknownGraph(ConfigError):
    pass


class ZeroFunction(ConfigError):
    pass


class NotAvailable(DegeneracyError):
    pass


class EmptySphere(DegeneracyError):
    pass


class ZeroNormalizer(DegeneracyError):
    pass


class FastPathUnavailable(FqGraphError):
    """No factorized identity applies; callers fall back to the generic evaluator."""
