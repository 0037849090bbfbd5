# adave/cli/flow.py

"""CLI command estimating optical flow over a PNG sequence."""

from pathlib import Path

import click

from adave.cli.common import workers_option
from adave.config import settings
from adave.services.flow import estimate_sequence_flow, write_flo_sequence
from adave.services.media import list_indexed_files, read_frame_sequence
from adave.utils import ValidationError, get_logger

logger = get_logger(__name__)


@click.command(name="flow")
@click.option("--frames-dir", required=True, type=click.Path(path_type=Path), help="PNG sequence")
@click.option(
    "--out-dir", required=True, type=click.Path(path_type=Path), help="Where .flo files go"
)
@click.option(
    "--method",
    type=click.Choice(["block_matching"]),
    default="block_matching",
    show_default=True,
    help="Flow estimator",
)
@click.option("--block", type=click.IntRange(min=1), default=settings.flow_block, show_default=True)
@click.option(
    "--radius", type=click.IntRange(min=0), default=settings.flow_radius, show_default=True
)
@workers_option
def flow(frames_dir: Path, out_dir: Path, method: str, block: int, radius: int, workers):
    """Write one .flo per successive frame pair, named after the earlier frame"""
    indexed = list_indexed_files(frames_dir, ".png")
    frames = read_frame_sequence(frames_dir)
    if len(frames) < 2:
        raise ValidationError("Flow needs at least two frames", {"frames": len(frames)})

    logger.info("Estimating flow", frames=len(frames), method=method, block=block, radius=radius)
    fields = estimate_sequence_flow(frames, block, radius, workers)
    paths = write_flo_sequence(fields, out_dir, indices=[i for i, _ in indexed[:-1]])
    click.echo(f"Wrote {len(paths)} flow files to {out_dir}")
