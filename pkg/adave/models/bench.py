# adave/models/bench.py

"""Benchmark, warp-error and memory reports."""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class LatencyStats(BaseModel):
    """Wall-clock samples (seconds) of one timed configuration."""

    samples: List[float] = Field(default_factory=list)
    median: float = 0.0
    p10: float = 0.0
    p90: float = 0.0


class BenchEntry(BaseModel):
    """One measured KV configuration."""

    name: str
    kv_tokens: int = Field(..., description="L")
    flops: int = Field(..., description="Modeled attention FLOPs of the timed queries")
    kv_bytes: int = Field(..., description="Serialized SparseKV payload bytes")
    workers: int = 1
    latency: LatencyStats = Field(default_factory=LatencyStats)


class Environment(BaseModel):
    """Where the numbers were taken."""

    platform: str
    processor: str
    python: str
    numpy: str
    cpu_count: int


class BenchReport(BaseModel):
    """Sparse vs fully extended attention at one benchmark point."""

    config: dict
    entries: List[BenchEntry] = Field(default_factory=list)
    token_ratio: float = Field(..., description="L_sparse / L_full")
    flop_ratio: float
    latency_ratio: float = Field(..., description="median sparse / median full, single worker")
    speedup: float
    multi_worker_latency_ratio: Optional[float] = None
    environment: Optional[Environment] = None


class StrategyEntry(BaseModel):
    """Cost of one KV extension strategy over a whole reference set."""

    strategy: str
    kv_tokens_per_frame: List[int]
    total_kv_tokens: int
    flops: int
    latency: Optional[LatencyStats] = None


class StrategyReport(BaseModel):
    frames: int
    tokens: int
    dim: int
    entries: List[StrategyEntry] = Field(default_factory=list)


class WarpErrorReport(BaseModel):
    """Mean absolute warp residual; raw on the 0..255 scale, scaled = raw / 255 x 100."""

    pairs: int
    raw: float
    scaled: float
    per_pair: List[float] = Field(default_factory=list)


class MemoryEntry(BaseModel):
    timestep: int
    block: int
    tokens: int
    payload_bytes: int


class MemoryReport(BaseModel):
    """Byte totals of a sealed cache, plus the admissible-Z answer when a budget is given."""

    entries: List[MemoryEntry] = Field(default_factory=list)
    payload_bytes: int = 0
    header_bytes: int = 0
    total_bytes: int = 0
    per_block: Dict[int, int] = Field(default_factory=dict)
    budget_bytes: Optional[int] = None
    max_reference_frames: Optional[int] = None
