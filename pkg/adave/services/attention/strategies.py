# adave/services/attention/strategies.py

"""
KV extension strategies the adaptive scheme is compared against.

Each strategy decides which reference ranks a query frame's KV is drawn from:

    first_only      frame 1
    first_prev      frame 1 and the previous frame
    first_two_prev  frame 1 and the two previous frames
    sampled         every `interval`-th frame plus the last (full tokens)
    full            every frame
    adaptive        sparse KV: full-frame ranks plus masked tokens elsewhere
"""

from typing import List, Mapping, Optional, Sequence

import numpy as np

from adave.models import MotionMask, SparseKV
from adave.utils import ValidationError

from .cost import kv_token_count
from .sparse_kv import build_sparse_kv, extend_kv_full

STRATEGIES = ("first_only", "first_prev", "first_two_prev", "sampled", "full", "adaptive")


def strategy_frames(strategy: str, query_rank: int, total: int, interval: int = 1) -> List[int]:
    """
    Ranks contributing full token sets to the query frame's KV.

    Raises:
        ValidationError: Unknown strategy, or `adaptive` (mask-driven, no frame list)
    """
    if not 1 <= query_rank <= total:
        raise ValidationError("Query rank out of range", {"rank": query_rank, "Z": total})
    if strategy == "first_only":
        ranks = {1}
    elif strategy == "first_prev":
        ranks = {1, max(1, query_rank - 1)}
    elif strategy == "first_two_prev":
        ranks = {1, max(1, query_rank - 2), max(1, query_rank - 1)}
    elif strategy == "sampled":
        ranks = {*range(1, total + 1, max(1, interval)), total}
    elif strategy == "full":
        ranks = set(range(1, total + 1))
    else:
        raise ValidationError("Strategy has no fixed frame set", {"strategy": strategy})
    return sorted(ranks)


def build_strategy_kv(
    strategy: str,
    keys: Sequence[np.ndarray],
    values: Sequence[np.ndarray],
    query_rank: int,
    masks: Optional[Mapping[int, MotionMask]] = None,
    interval: int = 1,
) -> SparseKV:
    """
    KV seen by the query frame at `query_rank` under a strategy.

    `interval` is r for `adaptive` and the sampling interval for `sampled`.
    """
    if strategy not in STRATEGIES:
        raise ValidationError("Unknown KV strategy", {"strategy": strategy, "known": STRATEGIES})
    if strategy == "adaptive":
        return build_sparse_kv(keys, values, masks or {}, interval)
    ranks = strategy_frames(strategy, query_rank, len(keys), interval)
    return extend_kv_full(
        [keys[i - 1] for i in ranks], [values[i - 1] for i in ranks], frame_ids=ranks
    )


def strategy_token_counts(
    strategy: str,
    total: int,
    tokens: int,
    popcounts: Optional[Mapping[int, int]] = None,
    interval: int = 1,
) -> List[int]:
    """KV length per query rank 1..Z, without building any matrices."""
    if strategy not in STRATEGIES:
        raise ValidationError("Unknown KV strategy", {"strategy": strategy, "known": STRATEGIES})
    if strategy == "adaptive":
        length = kv_token_count(total, tokens, popcounts or {}, interval).tokens
        return [length] * total
    return [
        len(strategy_frames(strategy, rank, total, interval)) * tokens
        for rank in range(1, total + 1)
    ]
