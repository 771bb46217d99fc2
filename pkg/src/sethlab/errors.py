"""Exception types shared across the package."""


class SethlabError(Exception):
    """Base class for every error raised by sethlab."""


class ParseError(SethlabError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParameterError(SethlabError, ValueError):
    """Arguments violate an operation's precondition."""


class CapacityError(SethlabError):
    """An exhaustive computation would exceed its configured cap."""


class StructuralError(SethlabError):
    """A circuit or graph is malformed (e.g. cyclic)."""


class InvariantViolation(SethlabError, AssertionError):
    """Internal bug trap: a construction broke one of its own guarantees."""
