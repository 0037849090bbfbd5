# adave/services/attention/wire.py

"""
SparseKV wire format.

Little-endian: u32 layout_version, u32 L, u32 d, then keys and values as
float32 row-major, then provenance as (u32 frame, u32 position) pairs.
"""

from typing import Optional

import numpy as np

from adave.models import SparseKV
from adave.utils import MediaIOError

HEADER_BYTES = 12


def payload_bytes(tokens: int, dim: int) -> int:
    """Keys + values + provenance, without the header."""
    return 2 * tokens * dim * 4 + 8 * tokens


def record_bytes(tokens: int, dim: int) -> int:
    return HEADER_BYTES + payload_bytes(tokens, dim)


def encode_sparse_kv(kv: SparseKV) -> bytes:
    header = np.array([kv.layout_version, kv.length, kv.dim], dtype="<u4").tobytes()
    return (
        header
        + np.ascontiguousarray(kv.keys, dtype="<f4").tobytes()
        + np.ascontiguousarray(kv.values, dtype="<f4").tobytes()
        + np.ascontiguousarray(kv.provenance, dtype="<u4").tobytes()
    )


def decode_sparse_kv(data: bytes, expected_version: Optional[int] = None) -> SparseKV:
    """
    Parse one encoded SparseKV record.

    Raises:
        MediaIOError: Truncated or oversized record, version mismatch, bad provenance
    """
    if len(data) < HEADER_BYTES:
        raise MediaIOError("SparseKV record shorter than its header", {"bytes": len(data)})
    version, tokens, dim = (int(x) for x in np.frombuffer(data, dtype="<u4", count=3))
    if expected_version is not None and version != expected_version:
        raise MediaIOError(
            "SparseKV layout version mismatch", {"found": version, "expected": expected_version}
        )
    expected = record_bytes(tokens, dim)
    if len(data) != expected:
        raise MediaIOError(
            "SparseKV record size does not match its header",
            {"bytes": len(data), "expected": expected},
        )

    n = tokens * dim
    keys = np.frombuffer(data, dtype="<f4", count=n, offset=HEADER_BYTES)
    values = np.frombuffer(data, dtype="<f4", count=n, offset=HEADER_BYTES + 4 * n)
    provenance = np.frombuffer(data, dtype="<u4", count=2 * tokens, offset=HEADER_BYTES + 8 * n)
    try:
        return SparseKV(
            keys=keys.reshape(tokens, dim),
            values=values.reshape(tokens, dim),
            provenance=provenance.reshape(tokens, 2),
            layout_version=version,
        )
    except ValueError as e:
        raise MediaIOError("SparseKV record failed validation", {"error": str(e)}) from e
