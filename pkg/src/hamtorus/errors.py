"""Shared exception types."""


class BudgetExceededError(RuntimeError):
    """An enumeration, merge, or evolution exceeded its work budget."""


class VerificationError(RuntimeError):
    """A verification suite found mismatches."""
