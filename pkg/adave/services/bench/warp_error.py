# adave/services/bench/warp_error.py

"""
Warp error: mean absolute difference between each frame and its successor
warped back by the forward flow, per pixel and channel.
"""

from typing import Sequence

import numpy as np

from adave.models import FlowField, Frame, WarpErrorReport
from adave.services.flow import warp_bilinear
from adave.utils import ValidationError, get_logger

logger = get_logger(__name__)


def warp_error(
    frames: Sequence[Frame], flows: Sequence[FlowField], margin: int = 0
) -> WarpErrorReport:
    """
    Args:
        frames: N frames
        flows: N-1 forward flows, flow i mapping frame i onto frame i+1
        margin: Border pixels excluded from every pair

    Returns:
        raw (0..255 scale) and scaled (raw / 255 x 100) errors

    Raises:
        ValidationError: Counts or sizes disagree, or the margin swallows the image
    """
    if len(frames) < 2 or len(flows) != len(frames) - 1:
        raise ValidationError(
            "Warp error needs N >= 2 frames and N-1 flows",
            {"frames": len(frames), "flows": len(flows)},
        )
    h, w = frames[0].shape
    if any(f.shape != (h, w) for f in frames) or any((f.height, f.width) != (h, w) for f in flows):
        raise ValidationError("Frames and flows must share one size", {"size": f"{w}x{h}"})
    if margin < 0 or 2 * margin >= min(h, w):
        raise ValidationError("Margin leaves no pixels", {"margin": margin, "size": f"{w}x{h}"})

    region = (slice(margin, h - margin), slice(margin, w - margin))
    per_pair = []
    for current, successor, flow in zip(frames, frames[1:], flows):
        warped = warp_bilinear(successor, flow).pixels.astype(np.int32)
        diff = np.abs(warped - current.pixels.astype(np.int32))[region]
        per_pair.append(float(diff.mean()))

    raw = float(np.mean(per_pair))
    logger.debug("Warp error", pairs=len(per_pair), raw=raw)
    return WarpErrorReport(
        pairs=len(per_pair), raw=raw, scaled=raw / 255.0 * 100.0, per_pair=per_pair
    )
