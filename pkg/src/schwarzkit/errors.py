class SchwarzkitError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(SchwarzkitError, ValueError):
    pass


class ZeroVectorError(SchwarzkitError, ValueError):
    """A direction-dependent quantity was requested for the zero vector."""


class ParameterError(SchwarzkitError, ValueError):
    """An argument lies outside its documented range (p < 2, non-unit e, ...)."""


class ValidationError(SchwarzkitError, ValueError):
    """Constructed data violates a type invariant (non-finite entries, non-orthonormal family, ...)."""


class ConsistencyError(SchwarzkitError, ArithmeticError):
    """Internal numeric self-check failed by more than rounding can explain."""


class FormatError(SchwarzkitError, ValueError):
    """A vector or index file could not be parsed.

    ``location`` is a human-readable position such as ``"line 4"``.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
