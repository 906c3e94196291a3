"""Exception hierarchy.

Every error raised on purpose by the package derives from ``ReluParamError``,
which is itself a ``ValueError`` so callers that only care about bad input can
catch the builtin.
"""


class ReluParamError(ValueError):
    """Base class for all package errors."""


class LengthMismatch(ReluParamError):
    pass


class DimMismatch(ReluParamError):
    pass


class NonpositiveScale(ReluParamError):
    pass


class InvalidPermutation(ReluParamError):
    pass


class NonFiniteValue(ReluParamError):
    pass


class InvalidBox(ReluParamError):
    pass


class InfeasibleGeometry(ReluParamError):
    """Slack maximization failed although a positive-volume chamber must exist."""


class PatternCapExceeded(ReluParamError):
    pass


class NoInteriorPoint(ReluParamError):
    pass


class DegenerateNormal(ReluParamError):
    pass


class DomainError(ReluParamError):
    pass


class OrderViolation(ReluParamError):
    pass


class InternalCaseViolation(RuntimeError):
    """Raised when a case split reaches a state that cannot occur mathematically."""


class InfeasibleQ(ReluParamError):
    pass


class FormatError(ReluParamError):
    """Malformed network or point file."""
