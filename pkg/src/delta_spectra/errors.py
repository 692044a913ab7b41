"""Exception hierarchy shared across the package."""


class DeltaSpectraError(Exception):
    """Base class for all package errors."""


class InvalidInputError(DeltaSpectraError, ValueError):
    """A parameter violates its domain (non-positive length, k <= 0, ...)."""


class OriginError(DeltaSpectraError, ZeroDivisionError):
    """Evaluation requested at k = 0, where w = i z / (2k) diverges."""


class UnsupportedConfigurationError(DeltaSpectraError, ValueError):
    """The coupling configuration is outside the scope of the routine."""


class ContourDegenerateError(DeltaSpectraError, ArithmeticError):
    """A zero of the integrand's denominator lies on (or too near) the contour."""


class ResolutionError(DeltaSpectraError, ArithmeticError):
    """Quadrature did not settle on an integer winding number."""
