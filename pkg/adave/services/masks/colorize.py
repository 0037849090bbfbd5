# adave/services/masks/colorize.py

"""
Middlebury flow colour coding: hue from direction on a 55-entry colour wheel,
saturation from magnitude normalised by the field's maximum, white at zero
motion.
"""

import numpy as np

from adave.config import settings
from adave.models import FlowField, Frame
from adave.services.media.raster import round_half_up

# Segment lengths of the wheel: red-yellow, yellow-green, green-cyan,
# cyan-blue, blue-magenta, magenta-red.
RY, YG, GC, CB, BM, MR = 15, 6, 4, 11, 13, 6


def make_colorwheel() -> np.ndarray:
    """(55, 3) wheel with channel values in [0, 255]."""
    ncols = RY + YG + GC + CB + BM + MR
    wheel = np.zeros((ncols, 3), dtype=np.float64)
    col = 0

    wheel[col : col + RY, 0] = 255
    wheel[col : col + RY, 1] = np.floor(255 * np.arange(RY) / RY)
    col += RY

    wheel[col : col + YG, 0] = 255 - np.floor(255 * np.arange(YG) / YG)
    wheel[col : col + YG, 1] = 255
    col += YG

    wheel[col : col + GC, 1] = 255
    wheel[col : col + GC, 2] = np.floor(255 * np.arange(GC) / GC)
    col += GC

    wheel[col : col + CB, 1] = 255 - np.floor(255 * np.arange(CB) / CB)
    wheel[col : col + CB, 2] = 255
    col += CB

    wheel[col : col + BM, 2] = 255
    wheel[col : col + BM, 0] = np.floor(255 * np.arange(BM) / BM)
    col += BM

    wheel[col : col + MR, 2] = 255 - np.floor(255 * np.arange(MR) / MR)
    wheel[col : col + MR, 0] = 255
    return wheel


COLORWHEEL = make_colorwheel()


def normalised_magnitude(flow: FlowField, epsilon: float = None) -> np.ndarray:
    """Magnitude divided by the field maximum (or by 1 when the maximum is below epsilon)."""
    epsilon = settings.flow_colour_epsilon if epsilon is None else epsilon
    mag = flow.magnitude()
    peak = float(mag.max()) if mag.size else 0.0
    return mag / (peak if peak >= epsilon else 1.0)


def flow_to_rgb(flow: FlowField, epsilon: float = None) -> Frame:
    """
    Colour-code a flow field.

    Returns:
        RGB frame; zero motion maps to (255, 255, 255)
    """
    vec = flow.vectors.astype(np.float64)
    u, v = vec[..., 0], vec[..., 1]
    rad = normalised_magnitude(flow, epsilon)

    ncols = COLORWHEEL.shape[0]
    angle = np.arctan2(-v, -u) / np.pi
    fk = (angle + 1.0) / 2.0 * (ncols - 1)
    k0 = np.floor(fk).astype(np.intp)
    k1 = k0 + 1
    k1[k1 == ncols] = 0
    f = (fk - k0)[..., None]

    col = (1.0 - f) * COLORWHEEL[k0] / 255.0 + f * COLORWHEEL[k1] / 255.0
    # rad <= 1 after max normalisation
    col = 1.0 - rad[..., None] * (1.0 - col)
    pixels = np.clip(round_half_up(255.0 * col), 0, 255).astype(np.uint8)
    return Frame(width=flow.width, height=flow.height, pixels=pixels)
