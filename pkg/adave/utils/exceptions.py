# adave/utils/exceptions.py

"""
Custom exception hierarchy for the adave engine.
Provides specific exception types for different failure modes; the CLI maps
each family to an exit code.
"""


class AdaveError(Exception):
    """Base exception for all engine-specific errors."""

    exit_code = 1

    def __init__(self, message: str, details: dict = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self):
        if self.details:
            details_str = ", ".join(f"{k}={v}" for k, v in self.details.items())
            return f"{self.message} ({details_str})"
        return self.message


class MediaIOError(AdaveError):
    """Raised when reading or writing raster, flow or cache files fails."""

    exit_code = 2


class FlowFileError(MediaIOError):
    """Raised when a Middlebury .flo file is malformed."""

    def __init__(self, message: str, reason: str, path: str = None):
        super().__init__(message, {"reason": reason, "path": path} if path else {"reason": reason})
        self.reason = reason
        self.path = path


class ValidationError(AdaveError):
    """Raised when inputs violate a precondition (shapes, dimensions, ranges)."""

    exit_code = 3


class ConfigError(ValidationError):
    """Raised when a configuration document or override is invalid."""

    def __init__(self, message: str, errors: list = None):
        super().__init__(message)
        self.errors = errors or []

    def __str__(self):
        msg = self.message
        if self.errors:
            errors_str = "\n  - " + "\n  - ".join(str(e) for e in self.errors)
            msg += f"\n\nErrors:{errors_str}"
        return msg


class InvariantError(AdaveError):
    """Raised when an internal invariant is breached (a pipeline bug)."""

    exit_code = 4


class CacheError(InvariantError):
    """Base class for KV cache discipline violations."""

    def __init__(self, message: str, timestep: int = None, block: int = None):
        details = {}
        if timestep is not None:
            details["timestep"] = timestep
        if block is not None:
            details["block"] = block
        super().__init__(message, details)
        self.timestep = timestep
        self.block = block


class DuplicateKeyError(CacheError):
    """Raised when a (timestep, block) entry is written twice."""
    pass


class SealedCacheError(CacheError):
    """Raised on a write after the cache was sealed."""
    pass


class CacheNotSealedError(CacheError):
    """Raised on a read (or save) before the joint pass sealed the cache."""
    pass


class CacheMissError(CacheError):
    """Raised when the intermediate pass asks for an entry that was never written."""
    pass


class CacheIntegrityError(CacheError):
    """Raised when a persisted cache fails its checksum, offset or version checks."""
    pass
