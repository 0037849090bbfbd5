# adave/services/masks/builder.py

"""
Flow -> binary motion masks at attention-block resolution.

Chain per reference frame i in 2..Z and resolution d:
flow F_i -> colour coding -> luminance -> area downsample to d rows -> Otsu.
Cells in the dark class (at or below the threshold) are moving; a uniform
image falls back to the configured degenerate policy.
"""

import math
from typing import List, Optional, Sequence

import numpy as np

from adave.models import (
    FlowField,
    FlowSettings,
    Frame,
    GrayImage,
    MaskPyramid,
    MaskSettings,
    MotionMask,
)
from adave.services.flow import chain_flows, estimate_flow_block_matching, read_flo
from adave.services.media import (
    downsample_avg,
    indexed_filename,
    list_indexed_files,
    otsu_threshold,
    rgb_to_gray,
)
from adave.services.media.raster import round_half_up
from adave.utils import MediaIOError, ValidationError, get_logger, map_with_workers

from .colorize import flow_to_rgb, normalised_magnitude

logger = get_logger(__name__)


def mask_grid_shape(height: int, width: int, block_res: int) -> tuple:
    """(rows, cols) of the token grid: d rows, aspect-preserving columns."""
    if height == width:
        return block_res, block_res
    return block_res, math.ceil(block_res * width / height)


def _check_resolution(height: int, width: int, block_res: int) -> tuple:
    rows, cols = mask_grid_shape(height, width, block_res)
    if block_res < 1 or rows > height or cols > width:
        raise ValidationError(
            "Mask resolution exceeds the image size",
            {"block_res": block_res, "image": f"{width}x{height}"},
        )
    return rows, cols


def _degenerate_bits(rows: int, cols: int, policy: str) -> np.ndarray:
    return np.full((rows, cols), policy == "moving", dtype=bool)


def flow_to_gray(flow: FlowField) -> GrayImage:
    """Grayscale flow visualisation G_i."""
    return rgb_to_gray(flow_to_rgb(flow))


def build_mask(
    gray_flow: GrayImage,
    block_res: int,
    frame_index: int = 2,
    degenerate_policy: str = "static",
) -> MotionMask:
    """
    Threshold a grayscale flow visualisation at one attention resolution.

    Raises:
        ValidationError: If block_res does not fit the image
    """
    rows, cols = _check_resolution(gray_flow.height, gray_flow.width, block_res)
    small = downsample_avg(gray_flow, cols, rows)
    threshold = otsu_threshold(small)
    if threshold is None:
        bits = _degenerate_bits(rows, cols, degenerate_policy)
    else:
        bits = small.values <= threshold
    return MotionMask(frame_index=frame_index, block_res=rows, width=cols, bits=bits)


def magnitude_image(flow: FlowField) -> GrayImage:
    """Flow magnitude normalised by its maximum, as 8-bit intensities (bright = fast)."""
    values = np.clip(round_half_up(255.0 * normalised_magnitude(flow)), 0, 255).astype(np.uint8)
    return GrayImage(width=flow.width, height=flow.height, values=values)


def build_magnitude_mask(
    flow: FlowField,
    block_res: int,
    frame_index: int = 2,
    degenerate_policy: str = "static",
) -> MotionMask:
    """Threshold raw flow magnitude instead of the colour visualisation (bright class moves)."""
    rows, cols = _check_resolution(flow.height, flow.width, block_res)
    small = downsample_avg(magnitude_image(flow), cols, rows)
    threshold = otsu_threshold(small)
    if threshold is None:
        bits = _degenerate_bits(rows, cols, degenerate_policy)
    else:
        bits = small.values > threshold
    return MotionMask(frame_index=frame_index, block_res=rows, width=cols, bits=bits)


def masks_for_flow(
    flow: FlowField,
    frame_index: int,
    resolutions: Sequence[int],
    mask_settings: Optional[MaskSettings] = None,
) -> List[MotionMask]:
    """All resolutions for one reference frame."""
    mask_settings = mask_settings or MaskSettings()
    if mask_settings.mode == "magnitude":
        return [
            build_magnitude_mask(flow, d, frame_index, mask_settings.degenerate_policy)
            for d in resolutions
        ]
    gray = flow_to_gray(flow)
    return [build_mask(gray, d, frame_index, mask_settings.degenerate_policy) for d in resolutions]


def flo_dir_frame_count(flo_dir: str) -> int:
    """
    Video length N implied by a directory of per-frame flows (last index + 2).

    Raises:
        MediaIOError: No .flo files
    """
    indexed = list_indexed_files(flo_dir, ".flo")
    return indexed[-1][0] + 2


def load_reference_flows(
    flo_dir: str,
    reference_numbers: Sequence[int],
    height: Optional[int] = None,
    width: Optional[int] = None,
) -> List[FlowField]:
    """
    Flows between successive reference frames from a directory of per-frame flows.

    flow_{k:03d}.flo holds frames k+1 -> k+2 (1-based), as written by the
    flow command. The flow of a reference pair (a, b) chains the files
    a-1 .. b-2, so any reference interval reads the same directory.

    Raises:
        MediaIOError: Missing or unreadable file
        ValidationError: Flow size differs from the frames or between files
    """
    cache = {}

    def _read(k: int) -> FlowField:
        if k not in cache:
            path = f"{flo_dir}/{indexed_filename('flow', k, '.flo')}"
            try:
                cache[k] = read_flo(path)
            except MediaIOError as e:
                raise MediaIOError(
                    "Missing or unreadable .flo for reference pair", {"path": path}
                ) from e
        return cache[k]

    flows = []
    for a, b in zip(reference_numbers, reference_numbers[1:]):
        steps = [_read(k) for k in range(a - 1, b - 1)]
        flow = chain_flows(steps)
        if height is not None and (flow.height, flow.width) != (height, width):
            raise ValidationError(
                "Flow size differs from the frames",
                {"pair": (a, b), "flow": (flow.height, flow.width), "frames": (height, width)},
            )
        flows.append(flow)
    logger.debug("Loaded reference flows", pairs=len(flows), files=len(cache))
    return flows


def build_mask_pyramid(
    reference_frames: Sequence[Frame],
    resolutions: Sequence[int],
    flow_settings: Optional[FlowSettings] = None,
    mask_settings: Optional[MaskSettings] = None,
    flows: Optional[Sequence[FlowField]] = None,
    reference_numbers: Optional[Sequence[int]] = None,
    workers: Optional[int] = 1,
) -> MaskPyramid:
    """
    Masks for every reference rank i in 2..Z at every resolution.

    Args:
        reference_frames: R_1..R_Z
        resolutions: d^j per attention block (duplicates collapse)
        flow_settings: Built-in estimator parameters or a .flo directory
        mask_settings: Threshold mode and degenerate policy
        flows: Precomputed flows between successive references (bypasses flow_settings)
        reference_numbers: Video frame numbers of R (for .flo lookup); defaults to 1..Z
        workers: Threads across frame pairs

    Raises:
        ValidationError: Fewer than two frames, size mismatch, bad resolution
        MediaIOError: Missing .flo file
    """
    flow_settings = flow_settings or FlowSettings()
    mask_settings = mask_settings or MaskSettings()
    if len(reference_frames) < 2:
        raise ValidationError("A mask pyramid needs at least two reference frames")
    shape = reference_frames[0].shape
    if any(f.shape != shape for f in reference_frames):
        raise ValidationError("Reference frames differ in size")
    resolutions = sorted(set(resolutions), reverse=True)
    reference_numbers = list(reference_numbers or range(1, len(reference_frames) + 1))

    if flows is None and flow_settings.source == "flo_dir":
        flows = load_reference_flows(flow_settings.flo_dir, reference_numbers, *shape)
    if flows is not None:
        if len(flows) != len(reference_frames) - 1:
            raise ValidationError(
                "Expected one flow per successive reference pair",
                {"flows": len(flows), "pairs": len(reference_frames) - 1},
            )
        if any((f.height, f.width) != shape for f in flows):
            raise ValidationError("Flow size differs from the frames")
        return build_mask_pyramid_from_flows(flows, resolutions, mask_settings, workers)

    def _one(i: int) -> List[MotionMask]:
        flow = estimate_flow_block_matching(
            reference_frames[i - 2],
            reference_frames[i - 1],
            flow_settings.block,
            flow_settings.radius,
        )
        return masks_for_flow(flow, i, resolutions, mask_settings)

    per_frame = map_with_workers(_one, range(2, len(reference_frames) + 1), workers)
    return _collect(per_frame, resolutions, mask_settings)


def build_mask_pyramid_from_flows(
    flows: Sequence[FlowField],
    resolutions: Sequence[int],
    mask_settings: Optional[MaskSettings] = None,
    workers: Optional[int] = 1,
) -> MaskPyramid:
    """
    Masks from flows between successive references; flow k yields rank k + 2.

    Raises:
        ValidationError: No flows, or flows of differing sizes
    """
    mask_settings = mask_settings or MaskSettings()
    if not flows:
        raise ValidationError("A mask pyramid needs at least one flow field")
    if any((f.height, f.width) != (flows[0].height, flows[0].width) for f in flows):
        raise ValidationError("Flow fields differ in size")
    resolutions = sorted(set(resolutions), reverse=True)
    per_frame = map_with_workers(
        lambda k: masks_for_flow(flows[k], k + 2, resolutions, mask_settings),
        range(len(flows)),
        workers,
    )
    return _collect(per_frame, resolutions, mask_settings)


def _collect(
    per_frame: List[List[MotionMask]], resolutions: List[int], mask_settings: MaskSettings
) -> MaskPyramid:
    pyramid = MaskPyramid(masks=[m for masks in per_frame for m in masks])
    logger.info(
        "Built mask pyramid",
        reference_frames=len(per_frame) + 1,
        resolutions=resolutions,
        masks=len(pyramid),
        mode=mask_settings.mode,
    )
    return pyramid
