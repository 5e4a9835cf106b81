"""Exception types shared across the package.

The CLI maps ParameterError/DomainError/CapacityError to exit code 1
(configuration problems) and the numerical failures to exit code 2.
"""


class NanoheatError(Exception):
    """Base class for all package errors."""


class ParameterError(NanoheatError, ValueError):
    """An argument violates a precondition (wrong range, mismatched shapes...)."""


class DomainError(NanoheatError, ValueError):
    """Input outside the mathematical domain of the operation (e.g. rank-deficient reference)."""


class CapacityError(NanoheatError, ValueError):
    """A composite object would exceed the supported size."""


class RegimeError(NanoheatError):
    """Parameters outside the physical regime an operation is defined for."""


class ConstraintViolationError(NanoheatError):
    """A constraint that must hold for any valid engine instance was violated."""


class NoConstraintError(NanoheatError):
    """Every sampled constraint is vacuous; the instance is degenerate."""


class DichotomyViolationError(NanoheatError):
    """An interior minimum was found where an endpoint minimum is guaranteed."""

    def __init__(self, message, alpha=None, gap=None):
        super().__init__(message)
        self.alpha = alpha
        self.gap = gap


class NumericalInconsistencyError(NanoheatError):
    """Two routes that must agree disagreed beyond tolerance."""
