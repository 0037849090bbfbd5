# adave/models/pipeline.py

"""Per-frame latent state and the run report of a two-pass editing run."""

from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .masks import MaskSummary


class LatentGrid(BaseModel):
    """
    Token state of one frame: one (T_j, c_j) float32 matrix per self-attention
    block, as of `timestep` (None before the first step).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    frame_index: int = Field(..., ge=1, description="Video frame number")
    timestep: Optional[int] = None
    tokens: List[np.ndarray] = Field(default_factory=list)

    def copy_state(self) -> "LatentGrid":
        return LatentGrid(
            frame_index=self.frame_index,
            timestep=self.timestep,
            tokens=[np.array(t, dtype=np.float32, copy=True) for t in self.tokens],
        )

    def same_bytes(self, other: "LatentGrid") -> bool:
        return len(self.tokens) == len(other.tokens) and all(
            a.shape == b.shape and a.tobytes() == b.tobytes()
            for a, b in zip(self.tokens, other.tokens)
        )


class BlockReport(BaseModel):
    """KV accounting of one self-attention block."""

    block: int
    resolution: int
    grid_width: int
    channels: int
    tokens_per_frame: int = Field(..., description="T_j")
    kv_tokens: int = Field(..., description="L_j of the sparse KV")
    full_kv_tokens: int = Field(..., description="Z x T_j")
    popcounts: Dict[int, int] = Field(default_factory=dict, description="Masked rank -> popcount")


class PhaseTimings(BaseModel):
    preprocess_s: float = 0.0
    joint_s: float = 0.0
    intermediate_s: float = 0.0


class RunReport(BaseModel):
    """Everything a run reports; identical across reruns except `timings`."""

    total_frames: int
    reference_frames: List[int]
    reference_count: int = Field(..., description="Z")
    full_frame_ranks: List[int]
    intermediate_order: List[List[int]] = Field(default_factory=list)
    blocks: List[BlockReport] = Field(default_factory=list)
    timesteps: List[int] = Field(default_factory=list)
    cache_entries: int = 0
    cache_bytes: int = 0
    joint_attention_flops: int = 0
    intermediate_attention_flops: int = 0
    mask_summary: Optional[MaskSummary] = None
    output_digest: str = ""
    workers: int = 1
    timings: PhaseTimings = Field(default_factory=PhaseTimings)

    @property
    def total_attention_flops(self) -> int:
        return self.joint_attention_flops + self.intermediate_attention_flops

    def deterministic_dump(self) -> dict:
        """The report without wall-clock fields and without the worker count."""
        return self.model_dump(mode="json", exclude={"timings", "workers"})
