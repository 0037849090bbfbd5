# adave/models/masks.py

"""
Motion masks at attention-block resolution, and the pyramid holding one mask
per (reference frame, resolution).
"""

from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, Field, PrivateAttr, field_validator, model_validator

from ._arrays import ARRAY_MODEL_CONFIG, frozen_array


class MotionMask(BaseModel):
    """
    Binary grid marking moving cells of reference frame `frame_index`
    (motion measured against reference frame_index - 1).

    `block_res` is the grid height d^j; `width` equals d^j for square frames
    and ceil(d^j * w / h) otherwise.
    """

    model_config = ARRAY_MODEL_CONFIG

    frame_index: int = Field(
        ..., ge=2, description="1-based reference rank i (frame 1 has no mask)"
    )
    block_res: int = Field(..., ge=1, description="Grid height d^j")
    width: int = Field(..., ge=1, description="Grid width")
    bits: np.ndarray = Field(
        ..., description="bool array of shape (block_res, width); True = moving"
    )

    @field_validator("bits", mode="before")
    @classmethod
    def _as_bool(cls, v):
        return frozen_array(np.asarray(v) != 0, np.bool_)

    @model_validator(mode="after")
    def _check_shape(self):
        if self.bits.shape != (self.block_res, self.width):
            raise ValueError(
                f"bits shape {self.bits.shape} does not match ({self.block_res}, {self.width})"
            )
        return self

    @property
    def token_count(self) -> int:
        """Number of attention tokens at this resolution."""
        return self.block_res * self.width

    @property
    def popcount(self) -> int:
        return int(np.count_nonzero(self.bits))

    @property
    def density(self) -> float:
        return self.popcount / self.token_count

    def positions(self) -> np.ndarray:
        """Row-major token positions of the moving cells, ascending."""
        return np.flatnonzero(self.bits.reshape(-1))


class MaskPyramid(BaseModel):
    """
    One MotionMask per reference frame i in 2..Z and per attention resolution.
    Immutable after construction.
    """

    model_config = ARRAY_MODEL_CONFIG

    masks: List[MotionMask] = Field(default_factory=list)

    _index: Dict[Tuple[int, int], MotionMask] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check_complete(self):
        index: Dict[Tuple[int, int], MotionMask] = {}
        shapes: Dict[int, tuple] = {}
        for mask in self.masks:
            key = (mask.frame_index, mask.block_res)
            if key in index:
                raise ValueError(f"duplicate mask for frame {key[0]} at resolution {key[1]}")
            index[key] = mask
            if shapes.setdefault(mask.block_res, mask.bits.shape) != mask.bits.shape:
                raise ValueError(f"masks at resolution {mask.block_res} disagree on shape")
        frames = {i for i, _ in index}
        resolutions = {d for _, d in index}
        if len(index) != len(frames) * len(resolutions):
            raise ValueError("mask pyramid is missing (frame, resolution) pairs")
        return self

    def model_post_init(self, __context) -> None:
        self._index = {(m.frame_index, m.block_res): m for m in self.masks}

    @property
    def frame_indices(self) -> List[int]:
        return sorted({i for i, _ in self._index})

    @property
    def resolutions(self) -> List[int]:
        return sorted({d for _, d in self._index}, reverse=True)

    def get(self, frame_index: int, block_res: int) -> MotionMask:
        return self._index[(frame_index, block_res)]

    def at(self, block_res: int) -> Dict[int, MotionMask]:
        """All masks at one resolution, keyed by reference rank."""
        return {i: m for (i, d), m in self._index.items() if d == block_res}

    def __len__(self) -> int:
        return len(self._index)


class MaskDensity(BaseModel):
    """Density of one mask, as reported in mask summaries."""

    frame_index: int
    block_res: int
    popcount: int
    tokens: int
    density: float


class MaskSummary(BaseModel):
    """Per frame/resolution densities of a pyramid."""

    reference_frames: List[int] = Field(
        default_factory=list, description="Video frame numbers of R"
    )
    resolutions: List[int] = Field(default_factory=list)
    entries: List[MaskDensity] = Field(default_factory=list)

    @classmethod
    def from_pyramid(
        cls, pyramid: MaskPyramid, reference_frames: List[int] = None
    ) -> "MaskSummary":
        entries = [
            MaskDensity(
                frame_index=i,
                block_res=d,
                popcount=pyramid.get(i, d).popcount,
                tokens=pyramid.get(i, d).token_count,
                density=pyramid.get(i, d).density,
            )
            for i in pyramid.frame_indices
            for d in pyramid.resolutions
        ]
        return cls(
            reference_frames=list(reference_frames or []),
            resolutions=pyramid.resolutions,
            entries=entries,
        )
