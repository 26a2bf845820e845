"""Exception hierarchy shared by all modules."""


class SugenoError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SugenoError, ValueError):
    """A set or point lies outside the domain it is required to live in."""


class ParseError(SugenoError, ValueError):
    """Malformed expression text.

    ``position`` is the 0-based character offset at which parsing failed.
    """

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EvaluationError(SugenoError, ArithmeticError):
    """Expression or function evaluation left the real domain."""


class BracketError(SugenoError):
    """The target function has no sign change on the supplied bracket."""


class PlateauError(BracketError):
    """The distribution function jumps across the diagonal at an unresolved level."""


class PreconditionError(SugenoError, ValueError):
    """Inputs violate a mathematical precondition (e.g. non-positive endpoint)."""


class BoundViolation(SugenoError, AssertionError):
    """A computed Sugeno integral exceeds a bound that should hold."""
