# adave/services/bench/__init__.py

from .warp_error import warp_error
from .harness import (
    bench_attention,
    bench_density_sweep,
    bench_strategies,
    environment,
    latency_stats,
    time_callable,
    synthetic_inputs,
    report_frame,
    strategy_frame,
    write_csv,
)
from .memory import memory_report

__all__ = [
    "warp_error",
    "bench_attention",
    "bench_density_sweep",
    "bench_strategies",
    "environment",
    "latency_stats",
    "time_callable",
    "synthetic_inputs",
    "report_frame",
    "strategy_frame",
    "write_csv",
    "memory_report",
]
