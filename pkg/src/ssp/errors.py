"""Shared exception types.

Exit-code mapping used by the CLI: ValidationError -> 2,
InsufficientPrecisionError -> 3, BudgetExceededError -> 4.
"""


class SspError(Exception):
    """Base class for all library errors."""


class ValidationError(SspError):
    """Input violates a documented precondition or invariant."""


class InsufficientPrecisionError(SspError):
    """A truncated-ring computation hit a censored (infinite) valuation.

    Callers holding exact integer data should rebuild at a higher
    truncation level and retry.
    """


class BudgetExceededError(SspError):
    """An exhaustive enumeration would exceed the configured budget."""


class FormulaInconsistencyError(SspError):
    """Two formulas that must agree did not (internal double-entry check)."""
