"""Exceptions shared across modules (the CLI maps them to exit codes)."""


class ConfigError(ValueError):
    """Invalid job configuration (exit code 2)."""


class BudgetExceeded(RuntimeError):
    """An enumeration ran past its evaluation budget (exit code 3)."""


class VerificationError(AssertionError):
    """An internal consistency check failed (exit code 4)."""
