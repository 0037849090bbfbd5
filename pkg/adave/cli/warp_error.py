# adave/cli/warp_error.py

"""CLI command printing the warp error of a frame sequence."""

from pathlib import Path
from typing import Optional

import click

from adave.cli.common import write_json
from adave.services.bench import warp_error as compute_warp_error
from adave.services.flow import read_flo_sequence
from adave.services.media import read_frame_sequence


@click.command(name="warp-error")
@click.option("--frames-dir", required=True, type=click.Path(path_type=Path))
@click.option("--flo-dir", required=True, type=click.Path(path_type=Path), help="N-1 forward flows")
@click.option("--margin", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--raw", is_flag=True, help="Print the 0..255-scale value instead of the x100 scale")
@click.option("--out", type=click.Path(path_type=Path), help="Also write the full report as JSON")
def warp_error(frames_dir: Path, flo_dir: Path, margin: int, raw: bool, out: Optional[Path]):
    """Mean absolute warp residual over successive pairs"""
    frames = read_frame_sequence(frames_dir)
    flows = read_flo_sequence(flo_dir)
    report = compute_warp_error(frames, flows, margin)
    if out is not None:
        write_json(report, out)
    click.echo(report.raw if raw else report.scaled)
