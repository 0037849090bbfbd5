# adave/services/flow/flo_io.py

"""
Middlebury .flo reader/writer.

Layout (little-endian): float32 magic 202021.25, int32 width, int32 height,
then width*height interleaved float32 (u, v) pairs in row-major order.
"""

from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from adave.models import FlowField
from adave.services.media.files import indexed_filename, list_indexed_files
from adave.utils import FlowFileError, MediaIOError, ValidationError, get_logger

logger = get_logger(__name__)

FLO_MAGIC = np.float32(202021.25)
HEADER_BYTES = 12

PathLike = Union[str, Path]


def encode_flo(field: FlowField) -> bytes:
    header = (
        np.array([FLO_MAGIC], dtype="<f4").tobytes()
        + np.array([field.width, field.height], dtype="<i4").tobytes()
    )
    return header + np.ascontiguousarray(field.vectors, dtype="<f4").tobytes()


def decode_flo(data: bytes, path: str = None) -> FlowField:
    """
    Parse .flo bytes.

    Raises:
        FlowFileError: bad_magic, bad_header, truncated, trailing_data or non_finite
    """
    if len(data) < HEADER_BYTES:
        raise FlowFileError("Flow file shorter than its header", "truncated", path)
    magic = np.frombuffer(data, dtype="<f4", count=1)[0]
    if magic != FLO_MAGIC:
        raise FlowFileError(f"Bad .flo magic {magic!r}", "bad_magic", path)
    width, height = (int(x) for x in np.frombuffer(data, dtype="<i4", count=2, offset=4))
    if width < 1 or height < 1:
        raise FlowFileError(f"Bad .flo dimensions {width}x{height}", "bad_header", path)

    expected = HEADER_BYTES + width * height * 8
    if len(data) < expected:
        raise FlowFileError(
            f"Flow payload truncated: {len(data) - HEADER_BYTES} of "
            f"{expected - HEADER_BYTES} bytes",
            "truncated",
            path,
        )
    if len(data) > expected:
        raise FlowFileError("Unexpected bytes after flow payload", "trailing_data", path)

    vectors = np.frombuffer(data, dtype="<f4", count=width * height * 2, offset=HEADER_BYTES)
    if not np.isfinite(vectors).all():
        raise FlowFileError("Flow payload contains non-finite values", "non_finite", path)
    return FlowField(width=width, height=height, vectors=vectors.reshape(height, width, 2))


def write_flo(field: FlowField, path: PathLike) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(encode_flo(field))
    except OSError as e:
        raise MediaIOError(f"Failed to write flow file: {e}", {"path": str(path)}) from e
    return path


def read_flo(path: PathLike) -> FlowField:
    path = Path(path)
    try:
        data = path.read_bytes()
    except FileNotFoundError as e:
        raise MediaIOError("Flow file not found", {"path": str(path)}) from e
    except OSError as e:
        raise MediaIOError(f"Failed to read flow file: {e}", {"path": str(path)}) from e
    return decode_flo(data, str(path))


def write_flo_sequence(
    fields: List[FlowField],
    directory: PathLike,
    prefix: str = "flow",
    indices: Optional[Sequence[int]] = None,
) -> List[Path]:
    """
    Write flow_000.flo (frames 0->1), flow_001.flo, ...

    `indices` names each file after the source frame of its pair instead.
    """
    directory = Path(directory)
    indices = list(indices) if indices is not None else list(range(len(fields)))
    if len(indices) != len(fields):
        raise ValidationError("One index per flow field is required")
    paths = [
        write_flo(f, directory / indexed_filename(prefix, i, ".flo"))
        for i, f in zip(indices, fields)
    ]
    logger.info("Wrote flow files", directory=str(directory), count=len(paths))
    return paths


def read_flo_sequence(pattern: PathLike) -> List[FlowField]:
    """Read every .flo file of a directory (or glob), ordered by filename index."""
    return [read_flo(p) for _, p in list_indexed_files(pattern, ".flo")]
