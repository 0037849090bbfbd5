# adave/services/bench/memory.py

"""Byte breakdown of a sealed KV cache and the reference-frame budget solver."""

from typing import Dict, Optional

from adave.models import MemoryEntry, MemoryReport
from adave.services.attention import max_reference_frames
from adave.services.cache import KVCache
from adave.utils import CacheNotSealedError, ValidationError


def memory_report(
    cache: KVCache,
    budget_bytes: Optional[int] = None,
    tokens: Optional[int] = None,
    dim: Optional[int] = None,
    density: Optional[float] = None,
    interval: Optional[int] = None,
) -> MemoryReport:
    """
    Exact bytes per (timestep, block) and in total; with a budget, also the
    largest Z whose sparse KV (T, d, density, r) fits it.

    Raises:
        CacheNotSealedError: Cache not sealed
        ValidationError: Budget given without T, d, density and r
    """
    if not cache.sealed:
        raise CacheNotSealedError("Memory report needs a sealed cache")
    stats = cache.stats()
    per_block: Dict[int, int] = {}
    for e in stats.entries:
        per_block[e.block] = per_block.get(e.block, 0) + e.payload_bytes

    report = MemoryReport(
        entries=[
            MemoryEntry(
                timestep=e.timestep,
                block=e.block,
                tokens=e.tokens,
                payload_bytes=e.payload_bytes,
            )
            for e in stats.entries
        ],
        payload_bytes=stats.payload_bytes,
        header_bytes=stats.header_bytes,
        total_bytes=stats.total_bytes,
        per_block=per_block,
    )
    if budget_bytes is not None:
        if None in (tokens, dim, density, interval):
            raise ValidationError("Budget query needs tokens, dim, density and interval")
        report.budget_bytes = budget_bytes
        report.max_reference_frames = max_reference_frames(
            budget_bytes, tokens, dim, density, interval
        )
    return report
