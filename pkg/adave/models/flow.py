# adave/models/flow.py

"""Dense motion field between two frames."""

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ._arrays import ARRAY_MODEL_CONFIG, frozen_array


class FlowField(BaseModel):
    """
    Per-pixel displacement (u, v) in pixels, stored as a float32
    (height, width, 2) array. Content at (x, y) of the source frame sits at
    (x + u, y + v) in the target frame.
    """

    model_config = ARRAY_MODEL_CONFIG

    width: int = Field(..., ge=1)
    height: int = Field(..., ge=1)
    vectors: np.ndarray = Field(..., description="float32 array of shape (height, width, 2)")

    @field_validator("vectors", mode="before")
    @classmethod
    def _as_float32(cls, v):
        return frozen_array(v, np.float32)

    @model_validator(mode="after")
    def _check(self):
        if self.vectors.shape != (self.height, self.width, 2):
            raise ValueError(
                f"vectors shape {self.vectors.shape} does not match "
                f"({self.height}, {self.width}, 2)"
            )
        if not np.isfinite(self.vectors).all():
            raise ValueError("flow vectors must be finite")
        return self

    @classmethod
    def from_array(cls, vectors: np.ndarray) -> "FlowField":
        arr = np.asarray(vectors)
        if arr.ndim != 3 or arr.shape[2] != 2:
            raise ValueError(f"expected (h, w, 2) array, got shape {arr.shape}")
        return cls(width=arr.shape[1], height=arr.shape[0], vectors=arr)

    @classmethod
    def uniform(cls, width: int, height: int, u: float, v: float) -> "FlowField":
        """Constant flow field."""
        vectors = np.empty((height, width, 2), dtype=np.float32)
        vectors[..., 0] = u
        vectors[..., 1] = v
        return cls(width=width, height=height, vectors=vectors)

    @property
    def u(self) -> np.ndarray:
        return self.vectors[..., 0]

    @property
    def v(self) -> np.ndarray:
        return self.vectors[..., 1]

    def magnitude(self) -> np.ndarray:
        """Per-pixel magnitude in float64."""
        vec = self.vectors.astype(np.float64)
        return np.hypot(vec[..., 0], vec[..., 1])
