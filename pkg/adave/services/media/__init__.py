# adave/services/media/__init__.py

from .raster import rgb_to_gray, downsample_avg, otsu_threshold, box_sums, round_half_up
from .files import (
    read_frame,
    write_frame,
    read_frame_sequence,
    write_frame_sequence,
    read_pgm,
    write_pgm,
    list_indexed_files,
    indexed_filename,
    frame_index_of,
)

__all__ = [
    "rgb_to_gray",
    "downsample_avg",
    "otsu_threshold",
    "box_sums",
    "round_half_up",
    "read_frame",
    "write_frame",
    "read_frame_sequence",
    "write_frame_sequence",
    "read_pgm",
    "write_pgm",
    "list_indexed_files",
    "indexed_filename",
    "frame_index_of",
]
