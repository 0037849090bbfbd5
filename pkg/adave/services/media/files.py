# adave/services/media/files.py

"""
Frame-sequence and grayscale raster file I/O.

Frames are 8-bit RGB PNG files; grayscale rasters and masks are binary PGM
(P5, maxval 255). Filenames carry a zero-padded frame index before the
extension (e.g. ``frame_007.png``).
"""

import glob
import re
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from adave.models import Frame, GrayImage
from adave.utils import MediaIOError, ValidationError, get_logger

logger = get_logger(__name__)

_INDEX_RE = re.compile(r"(\d+)(?=\.[^.]+$)")

PathLike = Union[str, Path]


def frame_index_of(path: PathLike) -> int:
    """Numeric index carried by a filename, e.g. 'f_012.png' -> 12."""
    match = _INDEX_RE.search(Path(path).name)
    if not match:
        raise MediaIOError("Filename carries no frame index", {"path": str(path)})
    return int(match.group(1))


def indexed_filename(prefix: str, index: int, suffix: str, digits: int = 3) -> str:
    return f"{prefix}_{index:0{digits}d}{suffix}"


def list_indexed_files(pattern: PathLike, suffix: str = ".png") -> List[Tuple[int, Path]]:
    """
    Resolve a directory or glob pattern into (index, path) pairs ordered by index.

    Raises:
        MediaIOError: If nothing matches or two files share an index
    """
    pattern = str(pattern)
    if Path(pattern).is_dir():
        paths = sorted(Path(pattern).glob(f"*{suffix}"))
    else:
        paths = [Path(p) for p in glob.glob(pattern)]
    if not paths:
        raise MediaIOError("No files match", {"pattern": pattern, "suffix": suffix})

    indexed = sorted((frame_index_of(p), p) for p in paths)
    indices = [i for i, _ in indexed]
    if len(set(indices)) != len(indices):
        raise MediaIOError("Duplicate frame indices in sequence", {"pattern": pattern})
    return indexed


def read_frame(path: PathLike) -> Frame:
    """Read one PNG (any Pillow-readable raster) as an RGB frame."""
    try:
        with Image.open(path) as img:
            pixels = np.asarray(img.convert("RGB"), dtype=np.uint8)
    except FileNotFoundError as e:
        raise MediaIOError("Frame file not found", {"path": str(path)}) from e
    except (UnidentifiedImageError, OSError, SyntaxError) as e:
        raise MediaIOError(f"Malformed frame file: {e}", {"path": str(path)}) from e
    return Frame.from_array(pixels)


def write_frame(frame: Frame, path: PathLike) -> Path:
    """Write a frame as 8-bit RGB PNG."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        Image.fromarray(np.ascontiguousarray(frame.pixels)).save(path, format="PNG")
    except OSError as e:
        raise MediaIOError(f"Failed to write frame: {e}", {"path": str(path)}) from e
    return path


def read_frame_sequence(pattern: PathLike) -> List[Frame]:
    """
    Read a PNG sequence ordered by the numeric index in each filename.

    Args:
        pattern: Directory of PNG files or a glob pattern

    Raises:
        MediaIOError: Missing or malformed files
        ValidationError: Frames of differing sizes
    """
    indexed = list_indexed_files(pattern, ".png")
    frames = [read_frame(p) for _, p in indexed]
    first = frames[0].shape
    for (index, path), frame in zip(indexed, frames):
        if frame.shape != first:
            raise ValidationError(
                "Frame dimensions differ across the sequence",
                {"path": str(path), "expected": first, "got": frame.shape},
            )
    logger.info("Read frame sequence", pattern=str(pattern), frames=len(frames), size=first)
    return frames


def write_frame_sequence(
    frames: List[Frame], directory: PathLike, prefix: str = "frame"
) -> List[Path]:
    """Write frames as prefix_000.png, prefix_001.png, ..."""
    directory = Path(directory)
    return [
        write_frame(frame, directory / indexed_filename(prefix, i, ".png"))
        for i, frame in enumerate(frames)
    ]


def write_pgm(image: GrayImage, path: PathLike) -> Path:
    """Write a grayscale raster as binary PGM (P5, maxval 255)."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        Image.fromarray(np.ascontiguousarray(image.values)).save(path, format="PPM")
    except OSError as e:
        raise MediaIOError(f"Failed to write PGM: {e}", {"path": str(path)}) from e
    return path


def read_pgm(path: PathLike) -> GrayImage:
    """
    Read a binary PGM (P5, maxval 255).

    Raises:
        MediaIOError: Missing file, wrong magic or malformed header/payload
    """
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            magic = fh.read(2)
        if magic != b"P5":
            raise MediaIOError("Not a binary PGM (P5) file", {"path": str(path), "magic": magic})
        with Image.open(path) as img:
            if img.mode != "L":
                raise MediaIOError(
                    "PGM is not 8-bit grayscale", {"path": str(path), "mode": img.mode}
                )
            values = np.asarray(img, dtype=np.uint8)
    except FileNotFoundError as e:
        raise MediaIOError("PGM file not found", {"path": str(path)}) from e
    except MediaIOError:
        raise
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as e:
        raise MediaIOError(f"Malformed PGM file: {e}", {"path": str(path)}) from e
    return GrayImage.from_array(values)
