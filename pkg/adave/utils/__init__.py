# adave/utils/__init__.py

from .logging import (
    bind_run_context,
    get_logger,
    numpy_to_builtin,
    select_renderer,
    setup_logging,
    verbosity_to_level,
)
from .exceptions import (
    AdaveError,
    MediaIOError,
    FlowFileError,
    ValidationError,
    ConfigError,
    InvariantError,
    CacheError,
    DuplicateKeyError,
    SealedCacheError,
    CacheNotSealedError,
    CacheMissError,
    CacheIntegrityError,
)
from .concurrency import map_with_workers, resolve_workers

__all__ = [
    "bind_run_context",
    "numpy_to_builtin",
    "select_renderer",
    "setup_logging",
    "get_logger",
    "verbosity_to_level",
    "AdaveError",
    "MediaIOError",
    "FlowFileError",
    "ValidationError",
    "ConfigError",
    "InvariantError",
    "CacheError",
    "DuplicateKeyError",
    "SealedCacheError",
    "CacheNotSealedError",
    "CacheMissError",
    "CacheIntegrityError",
    "map_with_workers",
    "resolve_workers",
]
