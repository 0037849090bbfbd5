# adave/services/bench/harness.py

"""
Latency benchmark of sparse vs fully extended attention.

Both configurations attend identical queries to KV built from identical
per-frame keys and values; only the gathered token set differs. Warmup runs
are discarded, then `repetitions` monotonic-clock samples are kept.
"""

import os
import platform
import sys
import time
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from adave.models import (
    BenchConfig,
    BenchEntry,
    BenchReport,
    Environment,
    LatencyStats,
    MotionMask,
    SparseKV,
    StrategyEntry,
    StrategyReport,
)
from adave.services.attention import (
    STRATEGIES,
    attend_frames,
    attention_flops,
    build_sparse_kv,
    build_strategy_kv,
    extend_kv_full,
    full_frame_indices,
    kv_token_count,
    masked_popcount,
    self_attention,
    strategy_token_counts,
)
from adave.utils import InvariantError, MediaIOError, get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]


def environment() -> Environment:
    return Environment(
        platform=platform.platform(),
        processor=platform.processor() or platform.machine(),
        python=sys.version.split()[0],
        numpy=np.__version__,
        cpu_count=os.cpu_count() or 1,
    )


def latency_stats(samples: Sequence[float]) -> LatencyStats:
    p10, p50, p90 = np.percentile(np.asarray(samples, dtype=np.float64), [10, 50, 90])
    return LatencyStats(samples=list(samples), median=float(p50), p10=float(p10), p90=float(p90))


def time_callable(fn: Callable[[], object], warmup: int, repetitions: int) -> LatencyStats:
    for _ in range(warmup):
        fn()
    samples = []
    for _ in range(repetitions):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return latency_stats(samples)


def synthetic_inputs(cfg: BenchConfig, density: Optional[float] = None):
    """
    Seeded per-frame K/V, timed queries and random masks of exact popcount.

    Masks are 1 x T grids; positions are drawn without replacement.
    """
    density = cfg.density if density is None else density
    rng = np.random.default_rng(cfg.seed)
    kv = rng.standard_normal((2, cfg.frames, cfg.tokens, cfg.dim)).astype(np.float32)
    queries = rng.standard_normal((cfg.query_frames, cfg.tokens, cfg.dim)).astype(np.float32)

    count = masked_popcount(cfg.tokens, density)
    full = set(full_frame_indices(cfg.frames, cfg.full_frame_interval))
    masks = {}
    for rank in range(2, cfg.frames + 1):
        if rank in full:
            continue
        bits = np.zeros(cfg.tokens, dtype=bool)
        bits[rng.permutation(cfg.tokens)[:count]] = True
        masks[rank] = MotionMask(
            frame_index=rank, block_res=1, width=cfg.tokens, bits=bits.reshape(1, -1)
        )
    return list(kv[0]), list(kv[1]), list(queries), masks


def _entry(
    name: str, kv: SparseKV, queries: List[np.ndarray], cfg: BenchConfig, workers: int
) -> BenchEntry:
    latency = time_callable(
        lambda: attend_frames(queries, kv, cfg.dim, cfg.head_count, workers),
        cfg.warmup,
        cfg.repetitions,
    )
    logger.info("Timed attention", name=name, kv_tokens=kv.length, median_s=latency.median)
    return BenchEntry(
        name=name,
        kv_tokens=kv.length,
        flops=len(queries) * attention_flops(cfg.tokens, kv.length, cfg.dim),
        kv_bytes=kv.payload_bytes,
        workers=workers,
        latency=latency,
    )


def bench_attention(cfg: BenchConfig) -> BenchReport:
    """
    Time SESA over the fully extended KV and over the sparse KV.

    Single-worker entries are always measured; when cfg.workers > 1 the
    multi-worker entries are measured and reported separately.

    Raises:
        InvariantError: Built KV length disagrees with the cost model
    """
    keys, values, queries, masks = synthetic_inputs(cfg)
    full = extend_kv_full(keys, values)
    sparse = build_sparse_kv(keys, values, masks, cfg.full_frame_interval)

    modeled = kv_token_count(
        cfg.frames,
        cfg.tokens,
        {i: m.popcount for i, m in masks.items()},
        cfg.full_frame_interval,
        dim=cfg.dim,
    )
    if modeled.tokens != sparse.length:
        raise InvariantError(
            "Sparse KV length disagrees with the cost model",
            {"built": sparse.length, "modeled": modeled.tokens},
        )

    entries = [_entry("full", full, queries, cfg, 1), _entry("sparse", sparse, queries, cfg, 1)]
    multi_ratio = None
    if cfg.workers > 1:
        multi = [
            _entry(f"full@{cfg.workers}", full, queries, cfg, cfg.workers),
            _entry(f"sparse@{cfg.workers}", sparse, queries, cfg, cfg.workers),
        ]
        entries.extend(multi)
        multi_ratio = multi[1].latency.median / multi[0].latency.median

    latency_ratio = entries[1].latency.median / entries[0].latency.median
    return BenchReport(
        config=cfg.model_dump(mode="json"),
        entries=entries,
        token_ratio=sparse.length / full.length,
        flop_ratio=entries[1].flops / entries[0].flops,
        latency_ratio=latency_ratio,
        speedup=1.0 / latency_ratio,
        multi_worker_latency_ratio=multi_ratio,
        environment=environment(),
    )


def bench_density_sweep(cfg: BenchConfig, densities: Sequence[float]) -> List[BenchEntry]:
    """Single-worker sparse entries across densities (same seed, same r)."""
    entries = []
    for density in densities:
        keys, values, queries, masks = synthetic_inputs(cfg, density)
        sparse = build_sparse_kv(keys, values, masks, cfg.full_frame_interval)
        entries.append(_entry(f"sparse@rho={density:g}", sparse, queries, cfg, 1))
    return entries


def bench_strategies(
    cfg: BenchConfig,
    strategies: Sequence[str] = STRATEGIES,
    sample_interval: int = 4,
    measure_latency: bool = False,
) -> StrategyReport:
    """
    KV length and modeled FLOPs per query frame under every extension strategy,
    optionally timed over all Z query frames.

    `sample_interval` drives `sampled`; `adaptive` uses cfg.full_frame_interval.
    """
    keys, values, _, masks = synthetic_inputs(cfg)
    popcounts = {i: m.popcount for i, m in masks.items()}
    entries = []
    for strategy in strategies:
        interval = cfg.full_frame_interval if strategy == "adaptive" else sample_interval
        lengths = strategy_token_counts(strategy, cfg.frames, cfg.tokens, popcounts, interval)
        entry = StrategyEntry(
            strategy=strategy,
            kv_tokens_per_frame=lengths,
            total_kv_tokens=sum(lengths),
            flops=sum(attention_flops(cfg.tokens, n, cfg.dim) for n in lengths),
        )
        if measure_latency:
            kvs = [
                build_strategy_kv(strategy, keys, values, rank, masks, interval)
                for rank in range(1, cfg.frames + 1)
            ]
            entry.latency = time_callable(
                lambda: [
                    self_attention(keys[n], kv.keys, kv.values, cfg.dim, cfg.head_count)
                    for n, kv in enumerate(kvs)
                ],
                cfg.warmup,
                cfg.repetitions,
            )
        entries.append(entry)
    return StrategyReport(frames=cfg.frames, tokens=cfg.tokens, dim=cfg.dim, entries=entries)


def report_frame(report: BenchReport) -> pd.DataFrame:
    """One row per benchmark entry."""
    return pd.DataFrame(
        [
            {
                "name": e.name,
                "workers": e.workers,
                "kv_tokens": e.kv_tokens,
                "flops": e.flops,
                "kv_bytes": e.kv_bytes,
                "median_s": e.latency.median,
                "p10_s": e.latency.p10,
                "p90_s": e.latency.p90,
                "samples": len(e.latency.samples),
            }
            for e in report.entries
        ]
    )


def strategy_frame(report: StrategyReport) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "strategy": e.strategy,
                "total_kv_tokens": e.total_kv_tokens,
                "flops": e.flops,
                "median_s": e.latency.median if e.latency else None,
            }
            for e in report.entries
        ]
    )


def write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False)
    except OSError as e:
        raise MediaIOError(f"Failed to write CSV: {e}", {"path": str(path)}) from e
    return path
