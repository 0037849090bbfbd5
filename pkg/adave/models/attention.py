# adave/models/attention.py

"""
Attention-side entities: per-block projection weights and the gathered
(sparse) key/value set shared by every query frame at one (timestep, block).
"""

from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ._arrays import ARRAY_MODEL_CONFIG, frozen_array

# Token matrices are plain (T, c) float32 arrays.
TokenMatrix = np.ndarray


class ProjectionWeights(BaseModel):
    """
    W_q, W_k, W_v of one self-attention block (c x d each), shared by all frames.
    """

    model_config = ARRAY_MODEL_CONFIG

    w_q: np.ndarray
    w_k: np.ndarray
    w_v: np.ndarray
    head_count: int = Field(default=1, ge=1)

    @field_validator("w_q", "w_k", "w_v", mode="before")
    @classmethod
    def _as_float32(cls, v):
        return frozen_array(v, np.float32)

    @model_validator(mode="after")
    def _check(self):
        if not (self.w_q.shape == self.w_k.shape == self.w_v.shape) or self.w_q.ndim != 2:
            raise ValueError("W_q, W_k and W_v must be 2-D with identical shapes")
        if self.w_q.shape[1] % self.head_count:
            raise ValueError(
                f"projection dim {self.w_q.shape[1]} is not divisible by {self.head_count} heads"
            )
        return self

    @classmethod
    def seeded(cls, channels: int, dim: int, seed: int, head_count: int = 1) -> "ProjectionWeights":
        """Deterministic weights scaled by 1/sqrt(channels)."""
        rng = np.random.default_rng(seed)
        scale = 1.0 / np.sqrt(channels)
        w = rng.standard_normal((3, channels, dim)) * scale
        return cls(w_q=w[0], w_k=w[1], w_v=w[2], head_count=head_count)

    @property
    def channels(self) -> int:
        return self.w_q.shape[0]

    @property
    def dim(self) -> int:
        return self.w_q.shape[1]


class SparseKV(BaseModel):
    """
    Concatenated key/value rows with per-row provenance (frame, token position),
    kept in canonical (frame, position) order.
    """

    model_config = ARRAY_MODEL_CONFIG

    keys: np.ndarray = Field(..., description="float32 (L, d)")
    values: np.ndarray = Field(..., description="float32 (L, d)")
    provenance: np.ndarray = Field(..., description="uint32 (L, 2): frame number, token position")
    layout_version: int = Field(default=1, ge=0)

    @field_validator("keys", "values", mode="before")
    @classmethod
    def _as_float32(cls, v):
        return frozen_array(v, np.float32)

    @field_validator("provenance", mode="before")
    @classmethod
    def _as_uint32(cls, v):
        arr = np.asarray(v)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        return frozen_array(arr, np.uint32)

    @model_validator(mode="after")
    def _check(self):
        if self.keys.ndim != 2 or self.keys.shape != self.values.shape:
            raise ValueError(f"keys {self.keys.shape} and values {self.values.shape} must match")
        if self.provenance.shape != (self.keys.shape[0], 2):
            raise ValueError(
                f"provenance shape {self.provenance.shape} does not match L={self.keys.shape[0]}"
            )
        if self.length > 1:
            packed = self.provenance[:, 0].astype(np.uint64) << np.uint64(32)
            packed |= self.provenance[:, 1].astype(np.uint64)
            if not np.all(packed[1:] > packed[:-1]):
                raise ValueError("provenance must be strictly ordered by (frame, position)")
        return self

    @property
    def length(self) -> int:
        return int(self.keys.shape[0])

    @property
    def dim(self) -> int:
        return int(self.keys.shape[1])

    @property
    def frames(self) -> np.ndarray:
        """Distinct frame numbers contributing tokens."""
        return np.unique(self.provenance[:, 0])

    @property
    def payload_bytes(self) -> int:
        """Keys + values (float32) + provenance (2 x uint32)."""
        return 2 * self.length * self.dim * 4 + 8 * self.length

    def same_bytes(self, other: "SparseKV") -> bool:
        return (
            self.layout_version == other.layout_version
            and self.keys.shape == other.keys.shape
            and self.keys.tobytes() == other.keys.tobytes()
            and self.values.tobytes() == other.values.tobytes()
            and self.provenance.tobytes() == other.provenance.tobytes()
        )


class KVCost(BaseModel):
    """Token count and modeled attention FLOPs of one query frame."""

    tokens: int = Field(..., ge=0, description="L, the KV length")
    full_tokens: int = Field(..., ge=0, description="Z x T, the fully extended length")
    query_tokens: int = Field(..., ge=0)
    dim: Optional[int] = None
    flops: Optional[int] = Field(None, description="2*Tq*L*d + Tq*L + 2*Tq*L*d")
    full_flops: Optional[int] = None

    @property
    def token_ratio(self) -> float:
        return self.tokens / self.full_tokens if self.full_tokens else 0.0
