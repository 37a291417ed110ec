"""Shared exception types.

The CLI maps these onto process exit codes: precondition violations exit
with 2, exhausted search/degree budgets with 3, and failed internal
certificates with 4.
"""


class PreconditionError(ValueError):
    """An operation was called with arguments violating its preconditions."""


class BudgetExhausted(RuntimeError):
    """A bounded search or resource budget ran out before success."""


class DegreeCapExceeded(BudgetExhausted):
    """A polynomial operation would exceed the global degree cap."""


class CertificateError(RuntimeError):
    """An internal exactness or bound certificate failed to validate."""
