# adave/services/attention/sparse_kv.py

"""
Extended key/value construction and the attention that consumes it.

`build_sparse_kv` gathers every token of full-frame ranks and only the moving
tokens of the others; `sesa` and `ifsa` attend a frame's queries to the
result.
"""

from typing import List, Mapping, Optional, Sequence

import numpy as np

from adave.config import settings
from adave.models import MotionMask, SparseKV
from adave.utils import ValidationError, get_logger, map_with_workers

from .kernels import self_attention

logger = get_logger(__name__)


def full_frame_indices(total: int, interval: int) -> List[int]:
    """
    Ranks whose whole token set enters the KV: {1} U {i : i mod r = 0} U {Z}.

    Raises:
        ValidationError: If Z < 1 or r < 1
    """
    if total < 1 or interval < 1:
        raise ValidationError("Z and r must be positive", {"Z": total, "r": interval})
    return sorted({1, total, *range(interval, total + 1, interval)})


def _sorted_frames(keys, values, frame_ids):
    if len(keys) != len(values) or not keys:
        raise ValidationError(
            "Need the same nonzero number of key and value matrices",
            {"keys": len(keys), "values": len(values)},
        )
    frame_ids = list(frame_ids) if frame_ids is not None else list(range(1, len(keys) + 1))
    if len(frame_ids) != len(keys) or len(set(frame_ids)) != len(frame_ids):
        raise ValidationError("frame_ids must be unique, one per frame")
    if min(frame_ids) < 0:
        raise ValidationError("frame_ids must be nonnegative")

    mats = [
        (np.asarray(k, dtype=np.float32), np.asarray(v, dtype=np.float32))
        for k, v in zip(keys, values)
    ]
    shape = mats[0][0].shape
    for k, v in mats:
        if k.ndim != 2 or k.shape != shape or v.shape != shape:
            raise ValidationError(
                "All frames must share (T, d)", {"expected": shape, "got": (k.shape, v.shape)}
            )
    order = sorted(range(len(frame_ids)), key=lambda n: frame_ids[n])
    return [frame_ids[n] for n in order], [mats[n] for n in order], shape


def _assemble(frame_ids, mats, rows, dim, layout_version) -> SparseKV:
    keys = np.concatenate([k[r] for (k, _), r in zip(mats, rows)], axis=0)
    values = np.concatenate([v[r] for (_, v), r in zip(mats, rows)], axis=0)
    provenance = np.concatenate(
        [
            np.stack([np.full(len(r), f, dtype=np.uint32), r.astype(np.uint32)], axis=1)
            for f, r in zip(frame_ids, rows)
        ],
        axis=0,
    ).reshape(-1, 2)
    return SparseKV(
        keys=keys.reshape(-1, dim),
        values=values.reshape(-1, dim),
        provenance=provenance,
        layout_version=settings.kv_layout_version if layout_version is None else layout_version,
    )


def extend_kv_full(
    keys: Sequence[np.ndarray],
    values: Sequence[np.ndarray],
    frame_ids: Optional[Sequence[int]] = None,
    layout_version: Optional[int] = None,
) -> SparseKV:
    """
    Concatenate every frame's K and V (L = N x T), in frame order.

    Raises:
        ValidationError: Heterogeneous shapes or bad frame ids
    """
    frame_ids, mats, (tokens, dim) = _sorted_frames(keys, values, frame_ids)
    rows = [np.arange(tokens)] * len(mats)
    return _assemble(frame_ids, mats, rows, dim, layout_version)


def build_sparse_kv(
    keys: Sequence[np.ndarray],
    values: Sequence[np.ndarray],
    masks: Mapping[int, MotionMask],
    full_frame_interval: int,
    frame_ids: Optional[Sequence[int]] = None,
    layout_version: Optional[int] = None,
) -> SparseKV:
    """
    Gather the sparse extended KV of Z reference frames.

    Frames are ranked 1..Z by frame id. Full-frame ranks contribute all T
    tokens; every other rank contributes only the rows its mask marks moving.

    Args:
        keys: Per-frame K (T, d)
        values: Per-frame V (T, d)
        masks: Masks at this block's resolution, keyed by rank
        full_frame_interval: r
        frame_ids: Video frame numbers recorded in the provenance (default 1..Z)

    Raises:
        ValidationError: Missing mask for a masked rank, or mask/token mismatch
    """
    frame_ids, mats, (tokens, dim) = _sorted_frames(keys, values, frame_ids)
    full = set(full_frame_indices(len(mats), full_frame_interval))

    rows = []
    for rank in range(1, len(mats) + 1):
        if rank in full:
            rows.append(np.arange(tokens))
            continue
        mask = masks.get(rank)
        if mask is None:
            raise ValidationError("Mask missing for a masked reference frame", {"rank": rank})
        if mask.token_count != tokens:
            raise ValidationError(
                "Mask resolution does not match the token grid",
                {"rank": rank, "mask_tokens": mask.token_count, "tokens": tokens},
            )
        rows.append(mask.positions())

    kv = _assemble(frame_ids, mats, rows, dim, layout_version)
    logger.debug("Built sparse KV", frames=len(mats), tokens=kv.length, full=len(full) * tokens)
    return kv


def sesa(
    q: np.ndarray, sparse: SparseKV, d: Optional[int] = None, head_count: int = 1
) -> np.ndarray:
    """Reference-frame queries against the shared sparse KV."""
    return self_attention(q, sparse.keys, sparse.values, d, head_count)


def ifsa(
    q: np.ndarray, cached: SparseKV, d: Optional[int] = None, head_count: int = 1
) -> np.ndarray:
    """Intermediate-frame queries against the cached KV; same kernel as sesa."""
    return self_attention(q, cached.keys, cached.values, d, head_count)


def attend_frames(
    queries: Sequence[np.ndarray],
    sparse: SparseKV,
    d: Optional[int] = None,
    head_count: int = 1,
    workers: Optional[int] = 1,
) -> List[np.ndarray]:
    """Per-frame attention against one shared KV, fanned out over workers."""
    return map_with_workers(
        lambda q: self_attention(q, sparse.keys, sparse.values, d, head_count), queries, workers
    )
