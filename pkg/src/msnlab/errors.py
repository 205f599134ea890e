"""Shared exception types."""


class BudgetExceeded(RuntimeError):
    """An exponential procedure hit its configured budget.

    ``lower``/``upper`` carry the best interval known when the search stopped,
    if the caller can provide one.
    """

    def __init__(self, message: str, lower: int | None = None, upper: int | None = None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper


class PreconditionError(ValueError):
    pass
