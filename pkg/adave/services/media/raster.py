# adave/services/media/raster.py

"""
Raster operations used by the motion-mask chain: luminance conversion,
area-average downsampling and Otsu thresholding.

All intensities are produced with round-half-up.
"""

from typing import Optional

import numpy as np

from adave.models import Frame, GrayImage
from adave.utils import ValidationError

# ITU-R BT.601 luma weights
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def round_half_up(x: np.ndarray) -> np.ndarray:
    return np.floor(np.asarray(x, dtype=np.float64) + 0.5)


def rgb_to_gray(frame: Frame) -> GrayImage:
    """
    Per-pixel luminance round(0.299 r + 0.587 g + 0.114 b), clamped to [0, 255].
    """
    rgb = frame.pixels.astype(np.float64)
    wr, wg, wb = LUMA_WEIGHTS
    lum = wr * rgb[..., 0] + wg * rgb[..., 1] + wb * rgb[..., 2]
    values = np.clip(round_half_up(lum), 0, 255).astype(np.uint8)
    return GrayImage(width=frame.width, height=frame.height, values=values)


def _cell_edges(source: int, target: int) -> np.ndarray:
    """Start offsets of the area-mapped cells partitioning [0, source) into target parts."""
    return (np.arange(target, dtype=np.int64) * source) // target


def box_sums(values: np.ndarray, target_h: int, target_w: int):
    """
    Sum and pixel count of every area-mapped cell.

    Returns:
        (sums, counts) arrays of shape (target_h, target_w)
    """
    h, w = values.shape[:2]
    ys = _cell_edges(h, target_h)
    xs = _cell_edges(w, target_w)
    sums = np.add.reduceat(np.add.reduceat(values, ys, axis=0), xs, axis=1)
    heights = np.diff(np.append(ys, h))
    widths = np.diff(np.append(xs, w))
    counts = np.outer(heights, widths)
    if sums.ndim == 3:
        counts = counts[..., None]
    return sums, counts


def downsample_avg(image: GrayImage, target_w: int, target_h: int) -> GrayImage:
    """
    Box-filter downsampling: each output cell is the rounded mean of the source
    pixels in its area-mapped rectangle.

    Raises:
        ValidationError: If a target dimension is < 1 or larger than the source
    """
    if target_w < 1 or target_h < 1:
        raise ValidationError(
            "Downsample target must be at least 1x1",
            {"target_w": target_w, "target_h": target_h},
        )
    if target_w > image.width or target_h > image.height:
        raise ValidationError(
            "Downsample target exceeds source (upsampling is not supported)",
            {"source": f"{image.width}x{image.height}", "target": f"{target_w}x{target_h}"},
        )
    sums, counts = box_sums(image.values.astype(np.int64), target_h, target_w)
    # exact integer round-half-up of sums / counts
    values = (2 * sums + counts) // (2 * counts)
    return GrayImage(width=target_w, height=target_h, values=values.astype(np.uint8))


def otsu_threshold(image: GrayImage) -> Optional[int]:
    """
    Otsu's threshold over the 256-bin histogram, splitting {<= t} vs {> t}.

    Between-class variance is compared in exact integer arithmetic, so ties
    are real ties and the smallest maximising t wins.

    Returns:
        The threshold, or None when every pixel shares one value (degenerate).
    """
    hist = np.bincount(image.values.reshape(-1), minlength=256).tolist()
    if sum(1 for h in hist if h) <= 1:
        return None

    n = sum(hist)
    s = sum(i * h for i, h in enumerate(hist))
    n0 = s0 = 0
    best_t, best_num, best_den = 0, 0, 1
    for t in range(256):
        n0 += hist[t]
        s0 += t * hist[t]
        n1 = n - n0
        if n0 == 0 or n1 == 0:
            continue
        # sigma_B^2 * n^2 = (s0 * n - s * n0)^2 / (n0 * n1)
        num = (s0 * n - s * n0) ** 2
        den = n0 * n1
        if num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den
    return best_t
