"""Shared exception types."""


class ValidationError(ValueError):
    """Raised when input data violates a documented precondition."""


class SupportMismatchError(ValidationError):
    """Raised when two objects that must share a support do not."""


class NotAFusionError(ValidationError):
    """Raised when an operation requires a fusion but the morphism is not one."""


class CapExceededError(ValidationError):
    """Raised when an enumeration would exceed its configured size cap."""
