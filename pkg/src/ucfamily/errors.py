"""Exception hierarchy shared by every module.

The CLI maps each class to its own exit status, so keep them distinct.
"""


class FamilyError(ValueError):
    """Base class for rejected inputs."""


class ParseError(FamilyError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NotUnionClosedError(FamilyError):
    """Raised when an operation needs a union-closed family.

    ``pair`` holds two member masks whose union is missing, when known.
    """

    def __init__(self, message="family is not union-closed", pair=None):
        super().__init__(message)
        self.pair = pair


class PreconditionError(FamilyError):
    pass


class InvariantViolation(RuntimeError):
    """A structural claim that the algorithms rely on failed at runtime."""


class ConjectureViolation(RuntimeError):
    """No element lies in more than half the member sets.

    Carries the family and the best candidate found so the case can be
    reproduced.
    """

    def __init__(self, message, family=None, report=None):
        super().__init__(message)
        self.family = family
        self.report = report
