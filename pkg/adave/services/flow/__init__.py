# adave/services/flow/__init__.py

from .block_matching import (
    estimate_flow_block_matching,
    estimate_sequence_flow,
    candidate_displacements,
)
from .flo_io import (
    read_flo,
    write_flo,
    encode_flo,
    decode_flo,
    read_flo_sequence,
    write_flo_sequence,
    FLO_MAGIC,
)
from .warp import warp_bilinear, bilinear_sample, compose_flows, chain_flows

__all__ = [
    "estimate_flow_block_matching",
    "estimate_sequence_flow",
    "candidate_displacements",
    "read_flo",
    "write_flo",
    "encode_flo",
    "decode_flo",
    "read_flo_sequence",
    "write_flo_sequence",
    "FLO_MAGIC",
    "warp_bilinear",
    "bilinear_sample",
    "compose_flows",
    "chain_flows",
]
