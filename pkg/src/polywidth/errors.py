"""Shared exception types."""


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed its configured size budget."""
