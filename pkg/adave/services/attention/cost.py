# adave/services/attention/cost.py

"""
Token, FLOP and byte model of sparse KV extension, and its inverse: the
largest reference set that fits a byte budget.
"""

from typing import Mapping, Optional

from adave.models import KVCost
from adave.utils import ValidationError

from .sparse_kv import full_frame_indices
from .wire import payload_bytes


def attention_flops(query_tokens: int, kv_tokens: int, dim: int) -> int:
    """Scores 2*Tq*L*d + softmax Tq*L + weighted sum 2*Tq*L*d."""
    return query_tokens * kv_tokens * (4 * dim + 1)


def kv_token_count(
    total: int,
    tokens: int,
    popcounts: Mapping[int, int],
    interval: int,
    dim: Optional[int] = None,
    query_tokens: Optional[int] = None,
) -> KVCost:
    """
    L = sum over full ranks of T + sum over masked ranks of popcount.

    Args:
        total: Z
        tokens: T per frame
        popcounts: Moving-token count per masked rank
        interval: r
        dim: d; when given, FLOPs per query frame are filled in
        query_tokens: T_q (defaults to T)

    Raises:
        ValidationError: Missing or out-of-range popcount for a masked rank
    """
    full = full_frame_indices(total, interval)
    kv = len(full) * tokens
    for rank in range(1, total + 1):
        if rank in full:
            continue
        if rank not in popcounts:
            raise ValidationError("Popcount missing for a masked reference frame", {"rank": rank})
        count = popcounts[rank]
        if not 0 <= count <= tokens:
            raise ValidationError("Popcount out of range", {"rank": rank, "popcount": count})
        kv += count

    tq = tokens if query_tokens is None else query_tokens
    cost = KVCost(tokens=kv, full_tokens=total * tokens, query_tokens=tq, dim=dim)
    if dim is not None:
        cost.flops = attention_flops(tq, kv, dim)
        cost.full_flops = attention_flops(tq, total * tokens, dim)
    return cost


def masked_popcount(tokens: int, density: float) -> int:
    """round-half-up(density * T)."""
    return min(tokens, int(density * tokens + 0.5))


def uniform_kv_tokens(total: int, tokens: int, density: float, interval: int) -> int:
    """L when every masked rank has the same density."""
    full = len(full_frame_indices(total, interval))
    return full * tokens + (total - full) * masked_popcount(tokens, density)


def max_reference_frames(
    budget_bytes: int,
    tokens: int,
    dim: int,
    density: float,
    interval: int,
) -> int:
    """
    Largest Z whose sparse KV payload fits the budget (0 if none does).

    L(Z) is not monotone (a new tail frame is always full), so the answer is
    the larger of two closed-form candidates: Z a multiple of r (tail already
    full) and Z = q*r + rem with the largest q and rem that fit. With D = T - p,
    those cost q*r*p + (q+1)*D and (q*r + rem)*p + (q+2)*D tokens.
    """
    if tokens < 1 or dim < 1 or interval < 1 or not 0.0 <= density <= 1.0:
        raise ValidationError(
            "Invalid budget query",
            {"T": tokens, "d": dim, "r": interval, "density": density},
        )
    limit = max(budget_bytes, 0) // payload_bytes(1, dim)
    if limit < tokens:
        return 0
    if interval == 1:
        return limit // tokens
    pop = masked_popcount(tokens, density)
    dense = tokens - pop
    step = interval * pop + dense
    best = 1
    q = (limit - dense) // step
    if q >= 1:
        best = max(best, q * interval)
    q = (limit - pop - 2 * dense) // step
    if q >= 0:
        room = limit - q * interval * pop - (q + 2) * dense
        rem = interval - 1 if pop == 0 else min(interval - 1, room // pop)
        if rem >= 1:
            best = max(best, q * interval + rem)
    return best


def full_extension_bytes(total: int, tokens: int, dim: int) -> int:
    return payload_bytes(total * tokens, dim)
