"""Exception hierarchy shared by the library and the command-line tool.

Every exception carries the process exit code the CLI reports for it.
"""


class MaeError(Exception):
    exit_code = 1


class DimensionError(MaeError, ValueError):
    exit_code = 2


class ValidationError(MaeError, ValueError):
    """Malformed or inconsistent input (asymmetric matrix, bad JSON shape, ...)."""

    exit_code = 2


class NotInAlgebraError(ValidationError):
    pass


class InvalidParametersError(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class FrameError(ValidationError):
    pass


class NoSolutionError(MaeError, ValueError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegenerateInputError(MaeError, ValueError):
    exit_code = 3


class NonRegularPointError(DegenerateInputError):
    pass


class AmbiguityError(MaeError):
    """Raised when a tolerance wall makes the answer undecidable."""

    exit_code = 4

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = list(candidates)


class ClassificationConflictError(MaeError):
    exit_code = 4


class SamplingError(MaeError):
    exit_code = 5


class ConsistencyError(MaeError):
    """Two independent computations of the same quantity disagree."""

    exit_code = 1
