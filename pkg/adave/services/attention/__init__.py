# adave/services/attention/__init__.py

from .kernels import softmax_rows, self_attention
from .sparse_kv import (
    full_frame_indices,
    extend_kv_full,
    build_sparse_kv,
    sesa,
    ifsa,
    attend_frames,
)
from .wire import encode_sparse_kv, decode_sparse_kv, payload_bytes, record_bytes, HEADER_BYTES
from .cost import (
    attention_flops,
    kv_token_count,
    masked_popcount,
    uniform_kv_tokens,
    max_reference_frames,
    full_extension_bytes,
)
from .strategies import STRATEGIES, strategy_frames, build_strategy_kv, strategy_token_counts

__all__ = [
    "softmax_rows",
    "self_attention",
    "full_frame_indices",
    "extend_kv_full",
    "build_sparse_kv",
    "sesa",
    "ifsa",
    "attend_frames",
    "encode_sparse_kv",
    "decode_sparse_kv",
    "payload_bytes",
    "record_bytes",
    "HEADER_BYTES",
    "attention_flops",
    "kv_token_count",
    "masked_popcount",
    "uniform_kv_tokens",
    "max_reference_frames",
    "full_extension_bytes",
    "STRATEGIES",
    "strategy_frames",
    "build_strategy_kv",
    "strategy_token_counts",
]
