"""Exception hierarchy shared by every module of the package."""


class OverlapError(Exception):
    """Base class for all errors raised by polyoverlap."""


class ValidationError(OverlapError, ValueError):
    """Input data is malformed: bad polygon, bad file, bad parameter."""


class PreconditionError(OverlapError, ValueError):
    """Input is well formed but an operation's precondition does not hold."""


class DegenerateConfigurationError(PreconditionError):
    """A query point lies on an event boundary, so no single face is defined."""


class NoSuchSliceError(PreconditionError):
    """The requested level is not below the maximum of the overlap function."""


class InfeasibleError(OverlapError):
    """A linear program has an empty feasible region."""
