# adave/services/attention/kernels.py

"""
Dense attention kernels.

Softmax(Q K^T / sqrt(d)) V evaluated in fixed-size query chunks, optionally
split into equal heads. Every caller (plain, SESA, IFSA) goes through
`self_attention`, so identical inputs give identical bytes.
"""

from typing import Optional

import numpy as np

from adave.config import settings
from adave.utils import ValidationError


def softmax_rows(m: np.ndarray) -> np.ndarray:
    """
    Row-wise softmax in max-subtracted form.

    Float inputs keep their precision; integer inputs are promoted to float64.
    """
    m = np.asarray(m)
    if not np.issubdtype(m.dtype, np.floating):
        m = m.astype(np.float64)
    shifted = m - m.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def _as_tokens(name: str, m) -> np.ndarray:
    arr = np.ascontiguousarray(m, dtype=np.float32)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be a 2-D token matrix", {"shape": arr.shape})
    return arr


def self_attention(
    q: np.ndarray,
    k: np.ndarray,
    v: np.ndarray,
    d: Optional[int] = None,
    head_count: int = 1,
    chunk_rows: Optional[int] = None,
) -> np.ndarray:
    """
    Softmax(Q K^T / sqrt(d_h)) V with one softmax over all key rows.

    Args:
        q: (T_q, d) queries
        k: (T_k, d) keys
        v: (T_k, d_v) values
        d: Projection dimension used for the scale; defaults to q's width
        head_count: Equal slices of d attended independently, outputs concatenated
        chunk_rows: Query rows per chunk (settings.attention_chunk_rows)

    Returns:
        float32 (T_q, d_v)

    Raises:
        ValidationError: On shape mismatch
    """
    q, k, v = _as_tokens("Q", q), _as_tokens("K", k), _as_tokens("V", v)
    if q.shape[1] != k.shape[1] or k.shape[0] != v.shape[0]:
        raise ValidationError(
            "Attention shape mismatch", {"Q": q.shape, "K": k.shape, "V": v.shape}
        )
    if k.shape[0] == 0:
        raise ValidationError("Attention needs at least one key row")
    if head_count < 1 or q.shape[1] % head_count or v.shape[1] % head_count:
        raise ValidationError(
            "Head count must divide the projection widths",
            {"head_count": head_count, "d": q.shape[1], "d_v": v.shape[1]},
        )

    d = q.shape[1] if d is None else d
    chunk = chunk_rows or settings.attention_chunk_rows
    hq = q.shape[1] // head_count
    hv = v.shape[1] // head_count
    scale = np.float32(1.0 / np.sqrt(d / head_count))

    out = np.empty((q.shape[0], v.shape[1]), dtype=np.float32)
    for h in range(head_count):
        qh = q[:, h * hq : (h + 1) * hq]
        kt = np.ascontiguousarray(k[:, h * hq : (h + 1) * hq].T)
        vh = np.ascontiguousarray(v[:, h * hv : (h + 1) * hv])
        for start in range(0, q.shape[0], chunk):
            scores = (qh[start : start + chunk] @ kt) * scale
            out[start : start + chunk, h * hv : (h + 1) * hv] = softmax_rows(scores) @ vh
    return out
