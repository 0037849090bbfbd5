# adave/services/pipeline/scene.py

"""
Moving-rectangle synthetic videos.

A seeded random-texture rectangle translates by a constant integer velocity
over a static flat or textured background. The texture is attached to the
rectangle, so block matching recovers the velocity exactly inside it.
"""

from typing import List, Tuple

import numpy as np

from adave.models import Frame, SyntheticScene
from adave.services.media.raster import box_sums


def rect_box(scene: SyntheticScene, frame_number: int) -> Tuple[int, int, int, int]:
    """Unclipped (x0, y0, x1, y1) of the rectangle in 1-based frame `frame_number`."""
    x0 = scene.rect_x + scene.velocity_x * (frame_number - 1)
    y0 = scene.rect_y + scene.velocity_y * (frame_number - 1)
    return x0, y0, x0 + scene.rect_width, y0 + scene.rect_height


def _background(scene: SyntheticScene) -> np.ndarray:
    if scene.background == "flat":
        return np.full((scene.height, scene.width, 3), scene.background_value, dtype=np.uint8)
    rng = np.random.default_rng([scene.texture_seed, 1])
    return rng.integers(0, 256, size=(scene.height, scene.width, 3), dtype=np.uint8)


def _texture(scene: SyntheticScene) -> np.ndarray:
    rng = np.random.default_rng([scene.texture_seed, 0])
    return rng.integers(0, 256, size=(scene.rect_height, scene.rect_width, 3), dtype=np.uint8)


def render_scene(scene: SyntheticScene) -> List[Frame]:
    """All `scene.frames` frames, rectangle clipped at the borders."""
    background = _background(scene)
    texture = _texture(scene)
    frames = []
    for n in range(1, scene.frames + 1):
        pixels = background.copy()
        x0, y0, x1, y1 = rect_box(scene, n)
        cx0, cy0 = max(x0, 0), max(y0, 0)
        cx1, cy1 = min(x1, scene.width), min(y1, scene.height)
        if cx0 < cx1 and cy0 < cy1:
            pixels[cy0:cy1, cx0:cx1] = texture[cy0 - y0 : cy1 - y0, cx0 - x0 : cx1 - x0]
        frames.append(Frame.from_array(pixels))
    return frames


def motion_ground_truth(
    scene: SyntheticScene, frame_a: int, frame_b: int, rows: int, cols: int
) -> np.ndarray:
    """
    Cells of a rows x cols grid touched by the rectangle in either frame.

    Returns:
        bool (rows, cols); all False for a static rectangle
    """
    if (scene.velocity_x, scene.velocity_y) == (0, 0):
        return np.zeros((rows, cols), dtype=bool)
    covered = np.zeros((scene.height, scene.width), dtype=np.int64)
    for n in (frame_a, frame_b):
        x0, y0, x1, y1 = rect_box(scene, n)
        ys = slice(max(y0, 0), max(min(y1, scene.height), 0))
        xs = slice(max(x0, 0), max(min(x1, scene.width), 0))
        covered[ys, xs] = 1
    sums, _ = box_sums(covered, rows, cols)
    return sums > 0


def mask_iou(predicted: np.ndarray, truth: np.ndarray) -> float:
    """Intersection over union of two boolean grids (1.0 when both are empty)."""
    union = np.logical_or(predicted, truth).sum()
    if union == 0:
        return 1.0
    return float(np.logical_and(predicted, truth).sum() / union)
