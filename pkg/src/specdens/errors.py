"""Exception hierarchy shared by all specdens modules."""


class SpecdensError(Exception):
    """Base class for every error raised by specdens."""


class NoClosedFormError(SpecdensError):
    """The weight family has no closed-form recurrence; use stieltjes_recurrence."""


class PrecisionExhaustedError(SpecdensError, ArithmeticError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConvergenceError(SpecdensError, ArithmeticError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class AccuracyError(SpecdensError, ArithmeticError):
    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DomainError(SpecdensError, ValueError):
    pass


class SingularityError(DomainError):
    """Evaluation requested at a singular point of a density."""


class TableRangeError(SpecdensError, IndexError):
    """A recurrence table is too short for the requested computation."""


class ClosedFormDefect(SpecdensError):
    """A closed-form density failed its normalization check."""
