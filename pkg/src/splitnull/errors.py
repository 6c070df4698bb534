"""Exception types shared across the package."""


class SplitNullError(Exception):
    """Base class for library errors."""


class DimensionMismatchError(SplitNullError, ValueError):
    """A vector or matrix does not conform to the expected geometry."""


class InvalidParameterError(SplitNullError, ValueError):
    """A numeric parameter is outside its admissible range."""


class EmptySetError(SplitNullError):
    """A constraint intersection was proven infeasible."""


class NoConvergenceError(SplitNullError):
    """An inner iterative solver exhausted its budget without meeting tolerance."""


class NotSingleValuedError(SplitNullError):
    """Pointwise evaluation was requested from a set-valued operator."""


class DivergedError(SplitNullError):
    """Iterates escaped the configured norm guard."""


class ProblemFileError(SplitNullError, ValueError):
    """A problem document failed schema validation or refers to bad data."""
