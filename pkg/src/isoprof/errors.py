"""Exception types raised by the numerical routines."""


class IsoprofError(Exception):
    """Base class for all package errors."""


class DomainError(IsoprofError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PreconditionError(IsoprofError, ValueError):
    """A documented precondition of an operation is not met."""


class NumericError(IsoprofError, ArithmeticError):
    """A numerical procedure failed to reach its target accuracy."""


class QuadratureError(NumericError):
    def __init__(self, message, achieved_tol=float("nan")):
        super().__init__(message)
        self.achieved_tol = achieved_tol


class UnboundedInverseError(NumericError):
    """No bracket for the inverse could be found below the expansion limit."""


class RootFindingError(NumericError):
    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class FitError(NumericError):
    """A constant fit had no usable data."""


class ConfigError(IsoprofError, ValueError):
    """Invalid experiment configuration."""
