# adave/services/masks/__init__.py

from .colorize import flow_to_rgb, make_colorwheel, normalised_magnitude, COLORWHEEL
from .builder import (
    build_mask,
    build_magnitude_mask,
    build_mask_pyramid,
    build_mask_pyramid_from_flows,
    flow_to_gray,
    magnitude_image,
    mask_grid_shape,
    masks_for_flow,
    load_reference_flows,
    flo_dir_frame_count,
)
from .pyramid_io import save_mask_pyramid, load_mask_pyramid, mask_filename

__all__ = [
    "flow_to_rgb",
    "make_colorwheel",
    "normalised_magnitude",
    "COLORWHEEL",
    "build_mask",
    "build_magnitude_mask",
    "build_mask_pyramid",
    "build_mask_pyramid_from_flows",
    "flow_to_gray",
    "magnitude_image",
    "mask_grid_shape",
    "masks_for_flow",
    "load_reference_flows",
    "flo_dir_frame_count",
    "save_mask_pyramid",
    "load_mask_pyramid",
    "mask_filename",
]
