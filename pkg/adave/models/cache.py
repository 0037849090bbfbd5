# adave/models/cache.py

"""KV cache keys, persisted manifest and byte accounting."""

from typing import List

from pydantic import BaseModel, ConfigDict, Field


class CacheKey(BaseModel):
    """Identifies one cached SparseKV: diffusion step t and self-attention block j."""

    model_config = ConfigDict(frozen=True)

    timestep: int = Field(..., ge=0)
    block: int = Field(..., ge=0)

    def __str__(self) -> str:
        return f"t{self.timestep}/b{self.block}"


class CacheRecord(BaseModel):
    """Manifest line for one SparseKV record inside the blob."""

    timestep: int
    block: int
    offset: int = Field(..., ge=0)
    length: int = Field(..., ge=0, description="Record size in bytes")
    crc32: int = Field(..., ge=0)
    tokens: int = Field(..., ge=0)
    dim: int = Field(..., ge=0)


class CacheManifest(BaseModel):
    """JSON index written next to the cache blob."""

    layout_version: int
    blob: str = Field(..., description="Blob filename, relative to the manifest")
    blob_bytes: int = Field(..., ge=0)
    records: List[CacheRecord] = Field(default_factory=list)


class CacheEntryStats(BaseModel):
    timestep: int
    block: int
    tokens: int
    dim: int
    payload_bytes: int
    header_bytes: int


class CacheStats(BaseModel):
    """Exact byte accounting of a cache (equals its serialized record sizes)."""

    entries: List[CacheEntryStats] = Field(default_factory=list)
    payload_bytes: int = 0
    header_bytes: int = 0

    @property
    def total_bytes(self) -> int:
        return self.payload_bytes + self.header_bytes
