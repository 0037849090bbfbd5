# adave/services/cache/__init__.py

from .kv_cache import KVCache

__all__ = ["KVCache"]
