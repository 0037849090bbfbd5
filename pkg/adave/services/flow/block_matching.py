# adave/services/flow/block_matching.py

"""
Exhaustive block-matching flow estimator.

Each block x block tile of `prev` is compared, by sum of absolute differences
over the RGB channels, against every displacement within +/- radius in an
edge-padded copy of `next`. The winning displacement is written to all
pixels of the tile. Ties go to the smallest |u| + |v|, then smallest v, then
smallest u, which makes the result independent of evaluation order.
"""

from typing import List, Optional, Tuple

import numpy as np

from adave.config import settings
from adave.models import FlowField, Frame
from adave.utils import ValidationError, get_logger, map_with_workers

logger = get_logger(__name__)


def candidate_displacements(radius: int) -> List[Tuple[int, int]]:
    """All (u, v) in the search window, in tie-break order."""
    window = range(-radius, radius + 1)
    return sorted(
        ((u, v) for v in window for u in window),
        key=lambda c: (abs(c[0]) + abs(c[1]), c[1], c[0]),
    )


def estimate_flow_block_matching(
    prev: Frame,
    next: Frame,
    block: Optional[int] = None,
    radius: Optional[int] = None,
    workers: Optional[int] = 1,
) -> FlowField:
    """
    Estimate coarse flow from prev to next.

    Args:
        prev: Source frame
        next: Target frame (same size)
        block: Tile side in pixels (default settings.flow_block)
        radius: Search radius in pixels (default settings.flow_radius)
        workers: Threads evaluating candidate displacements

    Returns:
        FlowField with |u|, |v| <= radius, piecewise constant per tile

    Raises:
        ValidationError: On size mismatch or invalid block/radius
    """
    block = settings.flow_block if block is None else block
    radius = settings.flow_radius if radius is None else radius
    if prev.shape != next.shape:
        raise ValidationError(
            "Frames passed to block matching differ in size",
            {"prev": prev.shape, "next": next.shape},
        )
    if block < 1 or radius < 0:
        raise ValidationError(
            "Invalid block matching parameters", {"block": block, "radius": radius}
        )

    h, w = prev.shape
    tiles_y = -(-h // block)
    tiles_x = -(-w // block)
    src = prev.pixels.astype(np.int32)
    padded = np.pad(
        next.pixels.astype(np.int32), ((radius, radius), (radius, radius), (0, 0)), mode="edge"
    )

    # reduceat with tile starts handles partial edge tiles
    def tile_sad(candidate: Tuple[int, int]) -> np.ndarray:
        u, v = candidate
        shifted = padded[radius + v : radius + v + h, radius + u : radius + u + w]
        diff = np.abs(src - shifted)
        ys = np.arange(tiles_y) * block
        xs = np.arange(tiles_x) * block
        return np.add.reduceat(np.add.reduceat(diff, ys, axis=0), xs, axis=1).sum(axis=-1)

    candidates = candidate_displacements(radius)
    sads = np.stack(map_with_workers(tile_sad, candidates, workers))
    # argmin returns the first minimum, i.e. the tie-break order above
    best = np.argmin(sads, axis=0)
    table = np.asarray(candidates, dtype=np.float32)
    tile_flow = table[best]

    vectors = np.repeat(np.repeat(tile_flow, block, axis=0), block, axis=1)[:h, :w]
    logger.debug(
        "Estimated block-matching flow",
        size=(h, w),
        block=block,
        radius=radius,
        moving_tiles=int(np.count_nonzero(np.any(tile_flow != 0, axis=-1))),
    )
    return FlowField(width=w, height=h, vectors=vectors)


def estimate_sequence_flow(
    frames: List[Frame],
    block: Optional[int] = None,
    radius: Optional[int] = None,
    workers: Optional[int] = 1,
) -> List[FlowField]:
    """Flow between every successive pair: len(frames) - 1 fields."""
    if len(frames) < 2:
        raise ValidationError(
            "At least two frames are needed to estimate flow", {"frames": len(frames)}
        )
    return map_with_workers(
        lambda pair: estimate_flow_block_matching(pair[0], pair[1], block, radius),
        list(zip(frames, frames[1:])),
        workers,
    )
