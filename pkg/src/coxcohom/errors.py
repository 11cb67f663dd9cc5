"""Exception hierarchy.

Every error carries the process exit code the command line front end
should use when it escapes a task.
"""


class CohomError(Exception):
    exit_code = 1


class InvalidInput(CohomError, ValueError):
    """Malformed input or a violated mathematical precondition."""

    exit_code = 2


class ProvisoViolation(InvalidInput):
    """A hypothesis of the formula being applied fails (mixed finite/infinite factors, ...)."""


class InsufficientData(InvalidInput):
    """A descriptor lacks the data a requested computation needs."""


class PoleError(InvalidInput):
    """A rational function was evaluated at one of its poles."""


class InvalidPosetOfSpaces(InvalidInput):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RegimeUncertifiable(CohomError):
    """Neither q nor 1/q could be certified to lie in the closed region
    of convergence, and no override was given."""

    exit_code = 3

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class ResourceCap(CohomError):
    """A size limit was hit.  ``partial`` holds whatever was computed."""

    exit_code = 4

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
