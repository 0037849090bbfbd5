# adave/tests/conftest.py

"""
Pytest configuration and shared fixtures.
Every input here is synthetic and seeded.
"""

from typing import List

import numpy as np
import pytest

from adave.models import EditConfig, FlowField, Frame, ScheduleConfig, SyntheticScene
from adave.services.flow import write_flo


def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line("markers", "slow: mark test as slow (large arrays or many repetitions)")
    config.addinivalue_line(
        "markers", "benchmark: mark test as a wall-clock benchmark (timing dependent)"
    )


@pytest.fixture
def rng():
    """Seeded generator; every test gets the same stream."""
    return np.random.default_rng(1234)


@pytest.fixture
def half_moving_scene() -> SyntheticScene:
    """
    Full-height textured bar (x 8..32 of 64) moving +3 px/frame over a flat
    background: block matching marks tiles x 8..40 moving, half the frame.
    """
    return SyntheticScene(
        width=64,
        height=64,
        frames=4,
        rect_x=8,
        rect_y=0,
        rect_width=24,
        rect_height=64,
        velocity_x=3,
        velocity_y=0,
        background="flat",
        background_value=96,
        texture_seed=7,
    )


@pytest.fixture
def interior_scene() -> SyntheticScene:
    """
    24x24 textured square at (16, 16) moving +2 px/frame, never touching a border.
    Block matching marks tiles x 16..48, y 16..40 moving.
    """
    return SyntheticScene(
        width=64,
        height=64,
        frames=3,
        rect_x=16,
        rect_y=16,
        rect_width=24,
        rect_height=24,
        velocity_x=2,
        velocity_y=0,
        background="flat",
        background_value=96,
        texture_seed=11,
    )


@pytest.fixture
def static_scene() -> SyntheticScene:
    """Zero-motion video: every frame identical."""
    return SyntheticScene(width=64, height=64, frames=6, velocity_x=0, velocity_y=0, texture_seed=3)


@pytest.fixture
def textured_frame(rng) -> Frame:
    return Frame.from_array(rng.integers(0, 256, size=(64, 64, 3), dtype=np.uint8))


@pytest.fixture
def late_motion_flo_dir(tmp_path):
    """
    Per-frame flows of a 4-frame 64x64 video: 1 -> 2 is still, then the left
    half moves +2 px per frame.
    """
    directory = tmp_path / "late_motion"
    directory.mkdir()
    moving = np.zeros((64, 64, 2), dtype=np.float32)
    moving[:, :32, 0] = 2.0
    write_flo(FlowField.uniform(64, 64, 0, 0), directory / "flow_000.flo")
    write_flo(FlowField.from_array(moving), directory / "flow_001.flo")
    write_flo(FlowField.from_array(moving), directory / "flow_002.flo")
    return directory


def make_edit_config(
    scene: SyntheticScene,
    reference_interval: int = 1,
    full_frame_interval: int = 2,
    timesteps: List[int] = None,
    seed: int = 0,
    head_count: int = 1,
    workers: int = 1,
) -> EditConfig:
    """Small, fast edit configuration over a synthetic scene."""
    return EditConfig(
        schedule=ScheduleConfig(
            total_frames=scene.frames,
            reference_interval=reference_interval,
            full_frame_interval=full_frame_interval,
            timesteps=timesteps or [980, 490, 0],
            seed=seed,
            resolutions=[16, 8],
            channels=[16, 32],
        ),
        head_count=head_count,
        workers=workers,
        scene=scene,
    )


@pytest.fixture
def edit_config_factory():
    return make_edit_config
