"""Exception types shared by all wedgelab modules."""


class WedgeLabError(Exception):
    """Base class for every error raised by wedgelab."""


class DomainError(WedgeLabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(WedgeLabError, ValueError):
    """A structural precondition (Euler element, standardness, ...) failed."""


class UnsupportedError(WedgeLabError, NotImplementedError):
    """The requested operation is not available for this model or algebra."""


class SingularityError(DomainError):
    """Evaluation hit a pole of a closed-form expression."""


class NumericError(WedgeLabError, ArithmeticError):
    """A numerical routine failed; ``diagnostics`` carries the evidence."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
