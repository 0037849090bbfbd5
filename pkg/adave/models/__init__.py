# adave/models/__init__.py

from .media import Frame, GrayImage
from .flow import FlowField
from .masks import MotionMask, MaskPyramid, MaskDensity, MaskSummary
from .attention import TokenMatrix, ProjectionWeights, SparseKV, KVCost
from .cache import CacheKey, CacheRecord, CacheManifest, CacheEntryStats, CacheStats
from .config import (
    ScheduleConfig,
    FlowSettings,
    MaskSettings,
    SyntheticScene,
    EditConfig,
    BenchConfig,
)
from .pipeline import LatentGrid, BlockReport, PhaseTimings, RunReport
from .bench import (
    LatencyStats,
    BenchEntry,
    Environment,
    BenchReport,
    StrategyEntry,
    StrategyReport,
    WarpErrorReport,
    MemoryEntry,
    MemoryReport,
)

__all__ = [
    # Media
    "Frame",
    "GrayImage",
    # Flow
    "FlowField",
    # Masks
    "MotionMask",
    "MaskPyramid",
    "MaskDensity",
    "MaskSummary",
    # Attention
    "TokenMatrix",
    "ProjectionWeights",
    "SparseKV",
    "KVCost",
    # Cache
    "CacheKey",
    "CacheRecord",
    "CacheManifest",
    "CacheEntryStats",
    "CacheStats",
    # Config
    "ScheduleConfig",
    "FlowSettings",
    "MaskSettings",
    "SyntheticScene",
    "EditConfig",
    "BenchConfig",
    # Pipeline
    "LatentGrid",
    "BlockReport",
    "PhaseTimings",
    "RunReport",
    # Bench
    "LatencyStats",
    "BenchEntry",
    "Environment",
    "BenchReport",
    "StrategyEntry",
    "StrategyReport",
    "WarpErrorReport",
    "MemoryEntry",
    "MemoryReport",
]
