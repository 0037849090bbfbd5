# adave/services/flow/warp.py

"""Backward bilinear warping with edge clamping, and flow chaining."""

from typing import Sequence

import numpy as np

from adave.models import FlowField, Frame
from adave.services.media.raster import round_half_up
from adave.utils import ValidationError


def bilinear_sample(image: np.ndarray, sx: np.ndarray, sy: np.ndarray) -> np.ndarray:
    """
    Sample an (h, w, c) float64 image at real coordinates, clamping to the border.
    """
    h, w = image.shape[:2]
    sx = np.clip(sx, 0.0, w - 1.0)
    sy = np.clip(sy, 0.0, h - 1.0)
    x0 = np.floor(sx).astype(np.intp)
    y0 = np.floor(sy).astype(np.intp)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = (sx - x0)[..., None]
    fy = (sy - y0)[..., None]
    top = image[y0, x0] * (1.0 - fx) + image[y0, x1] * fx
    bottom = image[y1, x0] * (1.0 - fx) + image[y1, x1] * fx
    return top * (1.0 - fy) + bottom * fy


def warp_bilinear(image: Frame, flow: FlowField) -> Frame:
    """
    output(x, y) = image sampled at (x + u, y + v).

    Raises:
        ValidationError: If flow and image sizes differ
    """
    if (flow.height, flow.width) != image.shape:
        raise ValidationError(
            "Flow and image sizes differ",
            {"image": image.shape, "flow": (flow.height, flow.width)},
        )
    h, w = image.shape
    ys, xs = np.mgrid[0:h, 0:w].astype(np.float64)
    vec = flow.vectors.astype(np.float64)
    sampled = bilinear_sample(image.pixels.astype(np.float64), xs + vec[..., 0], ys + vec[..., 1])
    pixels = np.clip(round_half_up(sampled), 0, 255).astype(np.uint8)
    return Frame(width=w, height=h, pixels=pixels)


def compose_flows(first: FlowField, second: FlowField) -> FlowField:
    """
    Flow A->C from A->B and B->C: first(x) + second(x + first(x)).

    The second field is sampled bilinearly, clamped to its border.

    Raises:
        ValidationError: If the fields differ in size
    """
    if (first.height, first.width) != (second.height, second.width):
        raise ValidationError(
            "Flow fields differ in size",
            {"first": (first.height, first.width), "second": (second.height, second.width)},
        )
    h, w = first.height, first.width
    ys, xs = np.mgrid[0:h, 0:w].astype(np.float64)
    head = first.vectors.astype(np.float64)
    tail = bilinear_sample(second.vectors.astype(np.float64), xs + head[..., 0], ys + head[..., 1])
    return FlowField(width=w, height=h, vectors=(head + tail).astype(np.float32))


def chain_flows(flows: Sequence[FlowField]) -> FlowField:
    """
    Compose consecutive per-frame flows F_{a->a+1}, ..., F_{b-1->b} into F_{a->b}.

    Raises:
        ValidationError: If no flows are given or sizes differ
    """
    if not flows:
        raise ValidationError("Chaining needs at least one flow field")
    chained = flows[0]
    for nxt in flows[1:]:
        chained = compose_flows(chained, nxt)
    return chained
