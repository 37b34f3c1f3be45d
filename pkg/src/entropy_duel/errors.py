"""Exception types shared across the package.

Three failure categories are distinguished so that callers (and the CLI)
can map them to distinct exit codes: malformed input, an operation applied
outside its mathematical domain, and an iterative method that ran out of
budget before reaching its tolerance.
"""


class ValidationError(ValueError):
    """Input violates a structural precondition (shape, mass, schema)."""


class DomainError(ValueError):
    """Operation evaluated outside its mathematical domain.

    Example: a strict-mode logarithm of a singular positive operator.
    """


class ConvergenceError(RuntimeError):
    """Iterative solver exhausted its budget before certifying tolerance."""

    def __init__(self, message: str, best_gap: float | None = None):
        super().__init__(message)
        self.best_gap = best_gap
