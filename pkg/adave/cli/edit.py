# adave/cli/edit.py

"""CLI command running the two-pass edit."""

from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import click
import numpy as np

from adave.cli.common import parse_int_list, parse_int_pair, seed_option, workers_option, write_json
from adave.config.loader import merge_overrides, read_config_document, validate_config
from adave.models import EditConfig, SyntheticScene
from adave.services.bench import memory_report
from adave.services.masks import save_mask_pyramid
from adave.services.media import list_indexed_files
from adave.services.pipeline import EditResult, run_pipeline
from adave.utils import MediaIOError, get_logger

logger = get_logger(__name__)


def _fill_total_frames(document: Dict[str, Any]) -> None:
    """Default schedule.total_frames to the number of available frames."""
    schedule = document.setdefault("schedule", {})
    if "total_frames" in schedule:
        return
    if document.get("frames_dir"):
        schedule["total_frames"] = len(list_indexed_files(document["frames_dir"], ".png"))
    elif document.get("scene") is not None:
        schedule["total_frames"] = document["scene"].get("frames", SyntheticScene().frames)


def save_latents(result: EditResult, directory: Path) -> None:
    """One .npy per (frame, block): frame_NNN_bJ.npy."""
    try:
        directory.mkdir(parents=True, exist_ok=True)
        for lat in result.latents:
            for j, tokens in enumerate(lat.tokens):
                np.save(directory / f"frame_{lat.frame_index:03d}_b{j}.npy", tokens)
    except OSError as e:
        raise MediaIOError(f"Failed to write latents: {e}", {"path": str(directory)}) from e


@click.command(name="edit")
@click.option("--config", "config_path", type=click.Path(path_type=Path), help="EditConfig JSON")
@click.option("--out-dir", required=True, type=click.Path(path_type=Path))
@click.option("--frames-dir", type=click.Path(path_type=Path), help="PNG sequence to edit")
@click.option("--synthetic", is_flag=True, help="Edit a moving-rectangle scene")
@click.option("--scene-frames", type=click.IntRange(min=1), help="Synthetic scene length")
@click.option("--velocity", callback=parse_int_pair, help="Synthetic rectangle velocity 'x,y'")
@click.option("-s", "--reference-interval", type=click.IntRange(min=1), help="Reference interval s")
@click.option(
    "-r", "--full-frame-interval", type=click.IntRange(min=1), help="Full-frame interval r"
)
@click.option("--timesteps", callback=parse_int_list, help="Strictly decreasing, e.g. 980,490,0")
@click.option("--resolutions", callback=parse_int_list, help="Block resolutions d, e.g. 16,8")
@click.option("--channels", callback=parse_int_list, help="Block channels c, e.g. 16,32")
@click.option("--heads", type=click.IntRange(min=1), help="Attention heads")
@click.option("--flo-dir", type=click.Path(path_type=Path), help="Use precomputed .flo files")
@click.option("--mask-mode", type=click.Choice(["gray", "magnitude"]))
@click.option("--save-cache", is_flag=True, help="Also write kv_cache.json + kv_cache.bin")
@seed_option
@workers_option
def edit(
    config_path: Optional[Path],
    out_dir: Path,
    frames_dir: Optional[Path],
    synthetic: bool,
    scene_frames: Optional[int],
    velocity: Optional[Tuple[int, int]],
    reference_interval: Optional[int],
    full_frame_interval: Optional[int],
    timesteps: Optional[List[int]],
    resolutions: Optional[List[int]],
    channels: Optional[List[int]],
    heads: Optional[int],
    flo_dir: Optional[Path],
    mask_mode: Optional[str],
    save_cache: bool,
    seed: Optional[int],
    workers: Optional[int],
):
    """Joint pass over reference frames, then intermediate frames from the cache"""
    document = read_config_document(config_path)
    if synthetic and document.get("scene") is None:
        document["scene"] = {}
    overrides = {
        "frames_dir": str(frames_dir) if frames_dir else None,
        "scene.frames": scene_frames,
        "scene.velocity_x": velocity[0] if velocity else None,
        "scene.velocity_y": velocity[1] if velocity else None,
        "schedule.reference_interval": reference_interval,
        "schedule.full_frame_interval": full_frame_interval,
        "schedule.timesteps": timesteps,
        "schedule.resolutions": resolutions,
        "schedule.channels": channels,
        "schedule.seed": seed,
        "head_count": heads,
        "flow.source": "flo_dir" if flo_dir else None,
        "flow.flo_dir": str(flo_dir) if flo_dir else None,
        "masks.mode": mask_mode,
        "workers": workers,
    }
    document = merge_overrides(document, overrides)
    if frames_dir:
        document.pop("scene", None)
    _fill_total_frames(document)
    cfg = validate_config(EditConfig, document)

    result = run_pipeline(cfg)
    report = result.report

    save_latents(result, out_dir / "latents")
    paths = [write_json(report, out_dir / "report.json")]
    paths.append(write_json(memory_report(result.cache), out_dir / "memory.json"))
    if result.masks is not None:
        save_mask_pyramid(result.masks, out_dir / "masks", report.reference_frames)
        paths.append(out_dir / "masks" / "summary.json")
    if save_cache:
        paths.append(result.cache.save(out_dir / "kv_cache.json"))

    click.echo(
        f"Edited {report.total_frames} frames (Z={report.reference_count}, "
        f"cache entries={report.cache_entries}, digest={report.output_digest[:12]})"
    )
    for path in paths:
        click.echo(str(path))
