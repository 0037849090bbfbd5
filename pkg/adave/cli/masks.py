# adave/cli/masks.py

"""CLI command building the motion-mask pyramid."""

from pathlib import Path
from typing import List, Optional

import click

from adave.cli.common import parse_int_list, workers_option
from adave.config import settings
from adave.models import FlowSettings, MaskSettings
from adave.services.masks import (
    build_mask_pyramid,
    build_mask_pyramid_from_flows,
    flo_dir_frame_count,
    load_reference_flows,
    save_mask_pyramid,
)
from adave.services.media import read_frame_sequence
from adave.services.pipeline import select_reference_frames
from adave.utils import get_logger

logger = get_logger(__name__)


@click.command(name="masks")
@click.option(
    "--frames-dir", type=click.Path(path_type=Path), help="PNG sequence (flow is estimated)"
)
@click.option(
    "--flo-dir", type=click.Path(path_type=Path), help="Per-frame flows written by the flow command"
)
@click.option("--out-dir", required=True, type=click.Path(path_type=Path))
@click.option(
    "--resolutions",
    default="16,8",
    show_default=True,
    callback=parse_int_list,
    help="Attention resolutions d (grid rows), comma-separated",
)
@click.option(
    "-s",
    "--reference-interval",
    type=click.IntRange(min=1),
    default=1,
    show_default=True,
    help="Reference sampling interval",
)
@click.option("--mode", type=click.Choice(["gray", "magnitude"]), default="gray", show_default=True)
@click.option(
    "--degenerate",
    type=click.Choice(["static", "moving"]),
    default="static",
    show_default=True,
    help="Mask used when the thresholded image is uniform",
)
@click.option("--block", type=click.IntRange(min=1), default=settings.flow_block, show_default=True)
@click.option(
    "--radius", type=click.IntRange(min=0), default=settings.flow_radius, show_default=True
)
@workers_option
def masks(
    frames_dir: Optional[Path],
    flo_dir: Optional[Path],
    out_dir: Path,
    resolutions: List[int],
    reference_interval: int,
    mode: str,
    degenerate: str,
    block: int,
    radius: int,
    workers,
):
    """Write one PGM per (reference frame, resolution) plus summary.json"""
    if (frames_dir is None) == (flo_dir is None):
        raise click.UsageError("Give exactly one of --frames-dir or --flo-dir")
    mask_settings = MaskSettings(mode=mode, degenerate_policy=degenerate)

    if frames_dir is not None:
        frames = read_frame_sequence(frames_dir)
        reference = select_reference_frames(len(frames), reference_interval)
        pyramid = build_mask_pyramid(
            [frames[n - 1] for n in reference],
            resolutions,
            flow_settings=FlowSettings(block=block, radius=radius),
            mask_settings=mask_settings,
            reference_numbers=reference,
            workers=workers,
        )
    else:
        reference = select_reference_frames(flo_dir_frame_count(str(flo_dir)), reference_interval)
        flows = load_reference_flows(str(flo_dir), reference)
        pyramid = build_mask_pyramid_from_flows(flows, resolutions, mask_settings, workers)

    summary = save_mask_pyramid(pyramid, out_dir, reference)
    for entry in summary.entries:
        click.echo(f"frame {entry.frame_index} d={entry.block_res}: density {entry.density:.4f}")
    click.echo(f"Wrote {len(pyramid)} masks and summary.json to {out_dir}")
