# adave/models/media.py

"""
Raster entities: RGB frames of the guidance video and 8-bit grayscale images
(flow visualisations, downsampled grids, persisted masks).
"""

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ._arrays import ARRAY_MODEL_CONFIG, frozen_array


class Frame(BaseModel):
    """
    RGB frame with 8-bit channels, stored row-major as an (height, width, 3) array.
    """

    model_config = ARRAY_MODEL_CONFIG

    width: int = Field(..., ge=1, description="Width in pixels")
    height: int = Field(..., ge=1, description="Height in pixels")
    pixels: np.ndarray = Field(..., description="uint8 array of shape (height, width, 3)")

    @field_validator("pixels", mode="before")
    @classmethod
    def _as_uint8(cls, v):
        return frozen_array(v, np.uint8)

    @model_validator(mode="after")
    def _check_shape(self):
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError(
                f"pixels shape {self.pixels.shape} does not match "
                f"({self.height}, {self.width}, 3)"
            )
        return self

    @classmethod
    def from_array(cls, pixels: np.ndarray) -> "Frame":
        """Build a frame from an (h, w, 3) array."""
        arr = np.asarray(pixels)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValueError(f"expected (h, w, 3) array, got shape {arr.shape}")
        return cls(width=arr.shape[1], height=arr.shape[0], pixels=arr)

    @property
    def shape(self) -> tuple:
        return (self.height, self.width)


class GrayImage(BaseModel):
    """
    Single-channel 8-bit image stored row-major as an (height, width) array.
    """

    model_config = ARRAY_MODEL_CONFIG

    width: int = Field(..., ge=1, description="Width in pixels")
    height: int = Field(..., ge=1, description="Height in pixels")
    values: np.ndarray = Field(..., description="uint8 array of shape (height, width)")

    @field_validator("values", mode="before")
    @classmethod
    def _as_uint8(cls, v):
        return frozen_array(v, np.uint8)

    @model_validator(mode="after")
    def _check_shape(self):
        if self.values.shape != (self.height, self.width):
            raise ValueError(
                f"values shape {self.values.shape} does not match ({self.height}, {self.width})"
            )
        return self

    @classmethod
    def from_array(cls, values: np.ndarray) -> "GrayImage":
        """Build a gray image from an (h, w) array."""
        arr = np.asarray(values)
        if arr.ndim != 2:
            raise ValueError(f"expected (h, w) array, got shape {arr.shape}")
        return cls(width=arr.shape[1], height=arr.shape[0], values=arr)

    @property
    def shape(self) -> tuple:
        return (self.height, self.width)
