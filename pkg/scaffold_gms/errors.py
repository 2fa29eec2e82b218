"""Exception types raised by scaffold-gms."""

from typing import Any, Dict, Optional


class ScaffoldError(Exception):
    """Base class for every error raised by the package."""

    @property
    def kind(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form written to stderr by the CLI."""
        return {"kind": self.kind, "message": str(self)}


class DomainError(ScaffoldError, ValueError):
    """An input lies outside the domain of the operation."""


class SizeLimitError(DomainError):
    """Exhaustive work was requested above the configured bound."""

    def __init__(self, message: str, size: int, limit: int):
        super().__init__(f"{message} (size {size} exceeds limit {limit})")
        self.base_message = message
        self.size = size
        self.limit = limit

    def __reduce__(self):
        return type(self), (self.base_message, self.size, self.limit)


class ResourceLimitError(ScaffoldError):
    """A Laurent polynomial grew beyond the configured term count."""


class VerificationError(ScaffoldError):
    """Two independent computations of the same quantity disagree."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}

    def __reduce__(self):
        return type(self), (str(self), self.details)

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        if self.details:
            data["details"] = self.details
        return data
