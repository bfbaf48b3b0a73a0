"""
Custom exception types for the class-U coefficient toolkit.

Every failure mode is a distinct type so that callers (and the CLI exit-code
mapping) can react to it without parsing messages.
"""


class ToolkitError(Exception):
    """Base exception for all toolkit errors."""
    pass


class InputError(ToolkitError):
    """Raised when an operation rejects its input."""
    pass


class SeriesOrderError(InputError):
    """Raised when series orders mismatch or are too small for a request."""
    pass


class SpecSyntaxError(InputError):
    """Raised when a functional spec string cannot be parsed."""
    pass


class SingularSeriesError(ToolkitError):
    """Raised when inverting a series whose constant term vanishes."""
    pass


class NumericDegeneracyError(ToolkitError):
    """Raised when a Schur recursion denominator collapses."""
    pass


class NotAnalyticError(ToolkitError):
    """Raised when z/f(z) has a zero inside the unit disk."""
    pass


class SamplingStarvedError(ToolkitError):
    """Raised when rejection sampling exhausts its try budget."""
    pass


class ConfigurationError(ToolkitError):
    """Raised when configuration or command-line flags are invalid."""
    pass


class PersistenceError(ToolkitError):
    """Raised when search records cannot be written or read."""
    pass


class ValidationError(ToolkitError):
    """Raised when a constructed class-U function fails validation."""
    pass


class NormalizationError(ValidationError):
    """Raised when a_0 != 0 or a_1 != 1."""
    pass


class IdentityResidualError(ValidationError):
    """Raised when an algebraic identity residual exceeds its tolerance."""
    pass


class MembershipError(ValidationError):
    """Raised when class-U membership or a coefficient bound is violated."""
    pass
