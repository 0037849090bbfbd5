# adave/cli/bench.py

"""CLI command benchmarking sparse vs fully extended attention."""

from pathlib import Path
from typing import Optional

import click

from adave.cli.common import seed_option, write_json
from adave.config.loader import load_config
from adave.models import BenchConfig, MemoryReport
from adave.services.attention import full_extension_bytes, max_reference_frames
from adave.services.bench import bench_attention, bench_strategies, report_frame, write_csv
from adave.utils import get_logger

logger = get_logger(__name__)


@click.command(name="bench")
@click.option("--config", "config_path", type=click.Path(path_type=Path), help="BenchConfig JSON")
@click.option("--out-dir", required=True, type=click.Path(path_type=Path))
@click.option("--frames", type=click.IntRange(min=1), help="Z")
@click.option("--tokens", type=click.IntRange(min=1), help="T, tokens per frame")
@click.option("--dim", type=click.IntRange(min=1), help="d")
@click.option("--heads", type=click.IntRange(min=1), help="Attention heads")
@click.option("-r", "--full-frame-interval", type=click.IntRange(min=1), help="r")
@click.option("--density", type=click.FloatRange(0.0, 1.0), help="Mask density on masked frames")
@click.option("--repetitions", type=click.IntRange(min=3), help="Timed runs per configuration")
@click.option("--warmup", type=click.IntRange(min=0), help="Discarded runs per configuration")
@click.option("--query-frames", type=click.IntRange(min=1), help="Frames whose queries are timed")
@click.option("--workers", type=click.IntRange(min=1), help="Also time with this many workers")
@click.option("--csv", "write_csv_flag", is_flag=True, help="Also write bench.csv")
@click.option("--strategies", is_flag=True, help="Also write strategies.json (token/FLOP model)")
@click.option(
    "--budget-frames",
    type=click.IntRange(min=1),
    help="Solve the largest sparse Z fitting the full-extension bytes of this many frames",
)
@seed_option
def bench(
    config_path: Optional[Path],
    out_dir: Path,
    frames: Optional[int],
    tokens: Optional[int],
    dim: Optional[int],
    heads: Optional[int],
    full_frame_interval: Optional[int],
    density: Optional[float],
    repetitions: Optional[int],
    warmup: Optional[int],
    query_frames: Optional[int],
    workers: Optional[int],
    write_csv_flag: bool,
    strategies: bool,
    budget_frames: Optional[int],
    seed: Optional[int],
):
    """Time SESA over sparse and fully extended KV at one benchmark point"""
    cfg = load_config(
        BenchConfig,
        config_path,
        {
            "frames": frames,
            "tokens": tokens,
            "dim": dim,
            "head_count": heads,
            "full_frame_interval": full_frame_interval,
            "density": density,
            "repetitions": repetitions,
            "warmup": warmup,
            "query_frames": query_frames,
            "workers": workers,
            "seed": seed,
        },
    )
    report = bench_attention(cfg)
    paths = [write_json(report, out_dir / "bench.json")]
    if write_csv_flag:
        paths.append(write_csv(report_frame(report), out_dir / "bench.csv"))
    if strategies:
        paths.append(write_json(bench_strategies(cfg), out_dir / "strategies.json"))
    if budget_frames is not None:
        budget = full_extension_bytes(budget_frames, cfg.tokens, cfg.dim)
        solved = MemoryReport(
            budget_bytes=budget,
            max_reference_frames=max_reference_frames(
                budget, cfg.tokens, cfg.dim, cfg.density, cfg.full_frame_interval
            ),
        )
        paths.append(write_json(solved, out_dir / "budget.json"))

    click.echo(
        f"token ratio {report.token_ratio:.4f}, latency ratio {report.latency_ratio:.4f}, "
        f"speedup {report.speedup:.2f}x"
    )
    for path in paths:
        click.echo(str(path))
