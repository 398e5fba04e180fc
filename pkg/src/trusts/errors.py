"""Exception hierarchy.

Every error raised by the library derives from :class:`TrustsError`, and most
also derive from :class:`ValueError` so callers validating input can catch the
builtin type.
"""


class TrustsError(Exception):
    """Base class for all library errors."""


class InvalidArgument(TrustsError, ValueError):
    pass


class InvalidQubitCount(InvalidArgument):
    pass


class CoordinateOutOfRange(InvalidArgument):
    pass


class CapacityError(InvalidArgument):
    pass


class QubitCountMismatch(InvalidArgument):
    pass


class LengthMismatch(InvalidArgument):
    pass


class TargetOutOfRange(InvalidArgument):
    pass


class DuplicateTargets(InvalidArgument):
    pass


class NonUnitaryMatrix(InvalidArgument):
    pass


class UnnormalizedInput(InvalidArgument):
    pass


class InsufficientData(InvalidArgument):
    pass


class CircuitFormatError(InvalidArgument):
    pass


class DenseLimitExceeded(TrustsError):
    """A dense 2^N vector was requested above the configured qubit limit."""


class WorkspaceOverflow(TrustsError):
    pass


class ZeroStateError(TrustsError, ArithmeticError):
    """All amplitudes vanished; the truncated state collapsed to zero."""


# The names used for the empty-workspace and collapse-to-zero conditions.
EmptyWorkspace = ZeroStateError
