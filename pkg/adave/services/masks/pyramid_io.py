# adave/services/masks/pyramid_io.py

"""Persist a mask pyramid as PGM files (0 static, 255 moving) plus a JSON summary."""

import json
import re
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from adave.models import GrayImage, MaskPyramid, MaskSummary, MotionMask
from adave.services.media import read_pgm, write_pgm
from adave.utils import MediaIOError, get_logger

logger = get_logger(__name__)

_MASK_RE = re.compile(r"^mask_f(\d+)_d(\d+)\.pgm$")
SUMMARY_NAME = "summary.json"

PathLike = Union[str, Path]


def mask_filename(frame_index: int, block_res: int) -> str:
    return f"mask_f{frame_index:03d}_d{block_res:03d}.pgm"


def save_mask_pyramid(
    pyramid: MaskPyramid,
    directory: PathLike,
    reference_numbers: Optional[List[int]] = None,
) -> MaskSummary:
    """Write one PGM per mask and summary.json; returns the summary."""
    directory = Path(directory)
    for i in pyramid.frame_indices:
        for d in pyramid.resolutions:
            mask = pyramid.get(i, d)
            values = np.where(mask.bits, 255, 0).astype(np.uint8)
            write_pgm(GrayImage.from_array(values), directory / mask_filename(i, d))

    summary = MaskSummary.from_pyramid(pyramid, reference_numbers)
    (directory / SUMMARY_NAME).write_text(json.dumps(summary.model_dump(mode="json"), indent=2))
    logger.info("Saved mask pyramid", directory=str(directory), masks=len(pyramid))
    return summary


def load_mask_pyramid(directory: PathLike) -> MaskPyramid:
    """
    Reload a pyramid written by save_mask_pyramid.

    Raises:
        MediaIOError: Missing directory or a PGM holding values other than 0/255
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise MediaIOError("Mask directory not found", {"path": str(directory)})

    masks = []
    for path in sorted(directory.iterdir()):
        match = _MASK_RE.match(path.name)
        if not match:
            continue
        image = read_pgm(path)
        if not np.isin(image.values, (0, 255)).all():
            raise MediaIOError("Mask PGM holds values other than 0 and 255", {"path": str(path)})
        masks.append(
            MotionMask(
                frame_index=int(match.group(1)),
                block_res=image.height,
                width=image.width,
                bits=image.values == 255,
            )
        )
    return MaskPyramid(masks=masks)
