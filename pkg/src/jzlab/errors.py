"""Exception types shared across the package."""


class JzlabError(Exception):
    """Base class for all package errors."""


class ValidationError(JzlabError, ValueError):
    """Input outside an operation's domain (bad syntax, site outside window, ...)."""


class BudgetExceeded(JzlabError):
    """A predicted enumeration or table size exceeds the configured cap."""

    def __init__(self, what: str, predicted: int, cap: int):
        self.what = what
        self.predicted = predicted
        self.cap = cap
        super().__init__(f"{what}: predicted size {predicted} exceeds cap {cap}")
