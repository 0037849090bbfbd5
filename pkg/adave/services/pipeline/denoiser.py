# adave/services/pipeline/denoiser.py

"""
Deterministic stand-in for a diffusion U-Net.

Each block j keeps a (T_j, c_j) token grid per frame. One step at block j is
X <- X + Attn_j(RMSNorm(X)) @ W_mix_j, where Attn_j is whatever attention the
caller plugs in (SESA, IFSA or plain self-attention). All weights are seeded.
"""

from typing import List, Tuple

import numpy as np

from adave.models import Frame, LatentGrid, ProjectionWeights, ScheduleConfig
from adave.services.masks.builder import mask_grid_shape
from adave.services.media.raster import box_sums
from adave.utils import ValidationError, get_logger

logger = get_logger(__name__)

RMS_EPS = np.float32(1e-6)

# Seed-stream tags per block
_PROJECTION, _MIX, _ENCODER, _NOISE = range(4)


def rms_norm(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float32)
    return x / np.sqrt(np.mean(x * x, axis=-1, keepdims=True) + RMS_EPS)


class DenoiserBlock:
    """Weights and grid geometry of one self-attention block."""

    def __init__(self, index: int, rows: int, cols: int, channels: int, seed: int, head_count: int):
        self.index = index
        self.rows = rows
        self.cols = cols
        self.channels = channels
        self.projection = ProjectionWeights.seeded(
            channels, channels, seed=_block_seed(seed, index, _PROJECTION), head_count=head_count
        )
        rng = np.random.default_rng(_block_seed(seed, index, _MIX))
        self.w_mix = (rng.standard_normal((channels, channels)) * (0.5 / np.sqrt(channels))).astype(
            np.float32
        )
        rng = np.random.default_rng(_block_seed(seed, index, _ENCODER))
        self.encoder = rng.standard_normal((3, channels)).astype(np.float32)
        rng = np.random.default_rng(_block_seed(seed, index, _NOISE))
        self.noise = (0.1 * rng.standard_normal((rows * cols, channels))).astype(np.float32)

    @property
    def resolution(self) -> int:
        return self.rows

    @property
    def tokens(self) -> int:
        return self.rows * self.cols

    @property
    def dim(self) -> int:
        return self.projection.dim


def _block_seed(seed: int, block: int, tag: int) -> List[int]:
    return [seed, block, tag]


class SyntheticDenoiser:
    """
    Per-block projections and mixing stages for frames of one size.

    Raises:
        ValidationError: A block resolution does not fit the frame size
    """

    def __init__(self, schedule: ScheduleConfig, height: int, width: int, head_count: int = 1):
        self.height = height
        self.width = width
        self.head_count = head_count
        self.blocks: List[DenoiserBlock] = []
        for j, (res, channels) in enumerate(schedule.blocks):
            rows, cols = mask_grid_shape(height, width, res)
            if rows > height or cols > width:
                raise ValidationError(
                    "Block resolution exceeds the frame size",
                    {"block": j, "resolution": res, "frame": f"{width}x{height}"},
                )
            if channels % head_count:
                raise ValidationError(
                    "Channels not divisible by head_count", {"block": j, "channels": channels}
                )
            self.blocks.append(DenoiserBlock(j, rows, cols, channels, schedule.seed, head_count))
        logger.debug(
            "Built synthetic denoiser",
            blocks=[(b.rows, b.cols, b.channels) for b in self.blocks],
        )

    def initial_latent(self, frame: Frame, frame_number: int) -> LatentGrid:
        """
        Content-derived starting state: area-averaged RGB projected by the
        block encoder, plus block noise shared by every frame.
        """
        if frame.shape != (self.height, self.width):
            raise ValidationError(
                "Frame size differs from the denoiser",
                {"frame": frame.shape, "expected": (self.height, self.width)},
            )
        tokens = []
        for block in self.blocks:
            sums, counts = box_sums(frame.pixels.astype(np.float64), block.rows, block.cols)
            rgb = (sums / counts / 127.5 - 1.0).reshape(-1, 3).astype(np.float32)
            tokens.append((rgb @ block.encoder + block.noise).astype(np.float32))
        return LatentGrid(frame_index=frame_number, tokens=tokens)

    def project(self, x: np.ndarray, block: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Q, K, V of one frame's tokens at a block."""
        xn = rms_norm(x)
        w = self.blocks[block].projection
        return xn @ w.w_q, xn @ w.w_k, xn @ w.w_v

    def project_query(self, x: np.ndarray, block: int) -> np.ndarray:
        return rms_norm(x) @ self.blocks[block].projection.w_q

    def mix(self, x: np.ndarray, attended: np.ndarray, block: int) -> np.ndarray:
        """Residual add of the block's linear mixing stage."""
        return (x + attended @ self.blocks[block].w_mix).astype(np.float32)
