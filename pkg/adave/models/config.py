# adave/models/config.py

"""
Run configuration documents.

EditConfig is the JSON document accepted by `adave edit`; BenchConfig drives
`adave bench`. Defaults come from adave.config.settings where one exists.
"""

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from adave.config import settings


def _default_timesteps() -> List[int]:
    # DDIM-style descending schedule over a 1000-step training horizon
    n = settings.default_timesteps
    stride = max(1, 1000 // n)
    return [stride * k for k in range(n - 1, -1, -1)]


class ScheduleConfig(BaseModel):
    """
    Frame sampling and diffusion schedule.

    N frames, reference frames every s frames (plus the last), full-frame KV
    every r reference frames, a strictly decreasing list of timesteps, and one
    (resolution, channels) pair per self-attention block.
    """

    total_frames: int = Field(..., ge=1, description="N, frames in the video")
    reference_interval: int = Field(default=1, ge=1, description="s, reference sampling interval")
    full_frame_interval: int = Field(default=4, ge=1, description="r, full-frame KV interval")
    timesteps: List[int] = Field(default_factory=_default_timesteps)
    seed: int = Field(default=0, description="Seed for weights, latents and synthetic content")
    resolutions: List[int] = Field(default_factory=lambda: [16, 8], description="d^j per block")
    channels: List[int] = Field(default_factory=lambda: [16, 32], description="c_j per block")

    @field_validator("timesteps")
    @classmethod
    def _strictly_decreasing(cls, v: List[int]) -> List[int]:
        if not v:
            raise ValueError("timesteps must be nonempty")
        if any(b >= a for a, b in zip(v, v[1:])):
            raise ValueError("timesteps must be strictly decreasing")
        if any(t < 0 for t in v):
            raise ValueError("timesteps must be nonnegative")
        return v

    @field_validator("resolutions", "channels")
    @classmethod
    def _positive(cls, v: List[int]) -> List[int]:
        if not v or any(x < 1 for x in v):
            raise ValueError("must be a nonempty list of positive integers")
        return v

    @model_validator(mode="after")
    def _check(self):
        if self.reference_interval > self.total_frames:
            raise ValueError(
                f"reference_interval {self.reference_interval} "
                f"exceeds total_frames {self.total_frames}"
            )
        if len(self.resolutions) != len(self.channels):
            raise ValueError("resolutions and channels must have one entry per block")
        return self

    @property
    def blocks(self) -> List[Tuple[int, int]]:
        """(resolution, channels) per block."""
        return list(zip(self.resolutions, self.channels))


class FlowSettings(BaseModel):
    """Where motion comes from."""

    source: Literal["block_matching", "flo_dir"] = "block_matching"
    block: int = Field(default_factory=lambda: settings.flow_block, ge=1)
    radius: int = Field(default_factory=lambda: settings.flow_radius, ge=0)
    flo_dir: Optional[str] = Field(None, description="Directory of precomputed .flo files")

    @model_validator(mode="after")
    def _check(self):
        if self.source == "flo_dir" and not self.flo_dir:
            raise ValueError("flo_dir is required when source is 'flo_dir'")
        return self


class MaskSettings(BaseModel):
    """How flow becomes a binary mask."""

    mode: Literal["gray", "magnitude"] = Field(
        default="gray", description="Threshold the flow visualisation or the raw magnitude"
    )
    degenerate_policy: Literal["static", "moving"] = Field(
        default="static", description="Mask used when the thresholded image is uniform"
    )


class SyntheticScene(BaseModel):
    """
    Moving-rectangle scene: a textured rectangle translating at constant
    velocity over a flat or textured static background.
    """

    width: int = Field(default=64, ge=1)
    height: int = Field(default=64, ge=1)
    frames: int = Field(default=8, ge=1)
    rect_x: int = 16
    rect_y: int = 16
    rect_width: int = Field(default=24, ge=1)
    rect_height: int = Field(default=24, ge=1)
    velocity_x: int = 2
    velocity_y: int = 0
    background: Literal["flat", "textured"] = "flat"
    background_value: int = Field(default=96, ge=0, le=255)
    texture_seed: int = 0


class EditConfig(BaseModel):
    """Full configuration of one two-pass editing run."""

    schedule: ScheduleConfig
    flow: FlowSettings = Field(default_factory=FlowSettings)
    masks: MaskSettings = Field(default_factory=MaskSettings)
    head_count: int = Field(default=1, ge=1)
    workers: Optional[int] = Field(default_factory=lambda: settings.workers)
    frames_dir: Optional[str] = Field(None, description="PNG sequence; omitted when scene is set")
    scene: Optional[SyntheticScene] = None

    @model_validator(mode="after")
    def _check(self):
        for c in self.schedule.channels:
            if c % self.head_count:
                raise ValueError(f"channels {c} not divisible by head_count {self.head_count}")
        return self


class BenchConfig(BaseModel):
    """
    One sparse-vs-full attention benchmark point.
    """

    frames: int = Field(default=16, ge=1, description="Z")
    tokens: int = Field(default=4096, ge=1, description="T, tokens per frame")
    dim: int = Field(default=64, ge=1, description="d")
    head_count: int = Field(default=1, ge=1)
    full_frame_interval: int = Field(default=8, ge=1, description="r")
    density: float = Field(default=0.15, ge=0.0, le=1.0, description="rho on masked frames")
    repetitions: int = Field(default_factory=lambda: settings.bench_repetitions, ge=3)
    warmup: int = Field(default_factory=lambda: settings.bench_warmup, ge=0)
    query_frames: int = Field(
        default=1, ge=1, description="Reference frames whose queries are timed"
    )
    workers: int = Field(default=1, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def _check(self):
        if self.dim % self.head_count:
            raise ValueError(f"dim {self.dim} not divisible by head_count {self.head_count}")
        if self.query_frames > self.frames:
            raise ValueError("query_frames cannot exceed frames")
        return self
