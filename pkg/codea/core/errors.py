"""
Exception types shared by the optimization modules.
"""


class CodeaError(Exception):
    """Base class for all library errors."""


class ContractViolationError(CodeaError, ValueError):
    """Raised when an operation is called with arguments that break its preconditions."""


class InvalidArgumentError(CodeaError, ValueError):
    """Raised when a user-facing argument is outside the supported domain."""


class InvalidProblemError(CodeaError, ValueError):
    """Raised when problem metadata cannot be used (e.g. degenerate HV bounds)."""
