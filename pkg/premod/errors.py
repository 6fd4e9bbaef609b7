"""Exception hierarchy shared by all kernel modules.

Every error carries the exit code the command-line driver returns for it.
"""


class PremodError(Exception):
    exit_code = 1


class DomainError(PremodError):
    exit_code = 2


class InvalidPointError(PremodError):
    exit_code = 2


class SeriesNonConvergenceError(PremodError):
    exit_code = 3


class PoleError(PremodError):
    exit_code = 3


class SingularConfigurationError(PremodError):
    exit_code = 3


class NumericalBreakdownError(PremodError):
    """Raised when floating point can no longer reproduce an exact identity.

    Attributes:
        level (int): recursion level n at which the check failed (None if
            the failure is not tied to a level)
    """
    exit_code = 3

    def __init__(self, message, level=None):
        if level is not None:
            message = '%s (level n=%d)' % (message, level)
        super(NumericalBreakdownError, self).__init__(message)
        self.level = level


class SingularTransformationError(PremodError):
    exit_code = 3


class PoleProximityError(PremodError):
    exit_code = 3


class InconclusiveOrderError(PremodError):
    exit_code = 3


class IllConditionedFitError(PremodError):
    exit_code = 3


class BoundaryTooCloseError(PremodError):
    exit_code = 3


class SuspectedMultipleZeroError(PremodError):
    exit_code = 1


class InternalInconsistencyError(PremodError):
    exit_code = 1
