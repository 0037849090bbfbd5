# adave/tests/test_flow.py

"""Tests for the block-matching estimator, .flo files and bilinear warping."""

import numpy as np
import pytest

from adave.models import FlowField, Frame
from adave.services.flow import (
    FLO_MAGIC,
    candidate_displacements,
    chain_flows,
    compose_flows,
    decode_flo,
    encode_flo,
    estimate_flow_block_matching,
    estimate_sequence_flow,
    read_flo,
    read_flo_sequence,
    warp_bilinear,
    write_flo,
    write_flo_sequence,
)
from adave.utils import FlowFileError, MediaIOError, ValidationError


def _shifted(frame: Frame, u: int, v: int) -> Frame:
    """Content at (x, y) moves to (x + u, y + v), wrapping at the border."""
    return Frame.from_array(np.roll(frame.pixels, shift=(v, u), axis=(0, 1)))


class TestCandidateDisplacements:
    def test_zero_first_and_full_window(self):
        candidates = candidate_displacements(2)
        assert candidates[0] == (0, 0)
        assert len(candidates) == 25
        assert len(set(candidates)) == 25

    def test_tie_break_order(self):
        candidates = candidate_displacements(1)
        # |u|+|v| = 1 ring, smallest v first, then smallest u
        assert candidates[1:5] == [(0, -1), (-1, 0), (1, 0), (0, 1)]


class TestBlockMatching:
    def test_identical_frames_give_zero_flow(self, textured_frame):
        flow = estimate_flow_block_matching(textured_frame, textured_frame, block=8, radius=4)
        assert not flow.vectors.any()

    def test_recovers_global_shift_inside_border(self, textured_frame):
        moved = _shifted(textured_frame, 3, -2)
        flow = estimate_flow_block_matching(textured_frame, moved, block=8, radius=4)
        inner = flow.vectors[8:56, 8:56]
        assert (inner[..., 0] == 3).all()
        assert (inner[..., 1] == -2).all()

    def test_worker_count_does_not_change_result(self, textured_frame):
        moved = _shifted(textured_frame, -1, 2)
        one = estimate_flow_block_matching(textured_frame, moved, block=8, radius=3, workers=1)
        four = estimate_flow_block_matching(textured_frame, moved, block=8, radius=3, workers=4)
        assert one.vectors.tobytes() == four.vectors.tobytes()

    def test_vectors_bounded_by_radius(self, rng):
        a = Frame.from_array(rng.integers(0, 256, (20, 28, 3), dtype=np.uint8))
        b = Frame.from_array(rng.integers(0, 256, (20, 28, 3), dtype=np.uint8))
        flow = estimate_flow_block_matching(a, b, block=6, radius=2)
        assert flow.vectors.shape == (20, 28, 2)
        assert np.abs(flow.vectors).max() <= 2

    def test_size_mismatch(self, textured_frame):
        small = Frame.from_array(np.zeros((8, 8, 3), dtype=np.uint8))
        with pytest.raises(ValidationError):
            estimate_flow_block_matching(textured_frame, small)

    def test_sequence_needs_two_frames(self, textured_frame):
        with pytest.raises(ValidationError):
            estimate_sequence_flow([textured_frame])
        assert len(estimate_sequence_flow([textured_frame] * 3, block=16, radius=1)) == 2


class TestFloFiles:
    def test_round_trip(self, tmp_path, rng):
        field = FlowField.from_array(rng.normal(size=(5, 7, 2)).astype(np.float32))
        path = write_flo(field, tmp_path / "flow_000.flo")
        data = path.read_bytes()
        assert len(data) == 12 + 5 * 7 * 8
        assert np.frombuffer(data[:4], "<f4")[0] == FLO_MAGIC
        assert read_flo(path).vectors.tobytes() == field.vectors.tobytes()

    def test_sequence_named_by_source_index(self, tmp_path):
        fields = [FlowField.uniform(4, 4, 1, 0), FlowField.uniform(4, 4, 2, 0)]
        paths = write_flo_sequence(fields, tmp_path, indices=[0, 4])
        assert [p.name for p in paths] == ["flow_000.flo", "flow_004.flo"]
        assert [f.u[0, 0] for f in read_flo_sequence(tmp_path)] == [1, 2]

    def test_sequence_index_count_mismatch(self, tmp_path):
        with pytest.raises(ValidationError):
            write_flo_sequence([FlowField.uniform(4, 4, 0, 0)], tmp_path, indices=[0, 1])

    @pytest.mark.parametrize(
        "mutate,reason",
        [
            (lambda d: d[:8], "truncated"),
            (lambda d: b"\x00\x00\x00\x00" + d[4:], "bad_magic"),
            (lambda d: d[:-4], "truncated"),
            (lambda d: d + b"\x00", "trailing_data"),
            (
                lambda d: d[:4] + np.array([0, 3], dtype="<i4").tobytes() + d[12:],
                "bad_header",
            ),
            (
                lambda d: d[:12] + np.array([np.nan], dtype="<f4").tobytes() + d[16:],
                "non_finite",
            ),
        ],
    )
    def test_malformed(self, mutate, reason):
        data = encode_flo(FlowField.uniform(3, 2, 0.5, -0.5))
        with pytest.raises(FlowFileError) as exc:
            decode_flo(mutate(data))
        assert exc.value.reason == reason

    def test_missing_file(self, tmp_path):
        with pytest.raises(MediaIOError):
            read_flo(tmp_path / "flow_000.flo")


class TestWarp:
    def test_zero_flow_is_identity(self, textured_frame):
        warped = warp_bilinear(textured_frame, FlowField.uniform(64, 64, 0, 0))
        assert np.array_equal(warped.pixels, textured_frame.pixels)

    def test_integer_shift_is_exact_inside(self, textured_frame):
        moved = _shifted(textured_frame, 2, 1)
        warped = warp_bilinear(moved, FlowField.uniform(64, 64, 2, 1))
        assert np.array_equal(warped.pixels[:60, :60], textured_frame.pixels[:60, :60])

    def test_half_pixel_averages_neighbours(self):
        pixels = np.zeros((1, 2, 3), dtype=np.uint8)
        pixels[0, 1] = 100
        warped = warp_bilinear(Frame.from_array(pixels), FlowField.uniform(2, 1, 0.5, 0))
        assert warped.pixels[0, 0].tolist() == [50, 50, 50]
        # clamped at the right border
        assert warped.pixels[0, 1].tolist() == [100, 100, 100]

    def test_size_mismatch(self, textured_frame):
        with pytest.raises(ValidationError):
            warp_bilinear(textured_frame, FlowField.uniform(8, 8, 0, 0))


def _left_half_flow(width: int, height: int, u: float) -> FlowField:
    vectors = np.zeros((height, width, 2), dtype=np.float32)
    vectors[:, : width // 2, 0] = u
    return FlowField.from_array(vectors)


class TestFlowChaining:
    def test_uniform_flows_add(self):
        chained = chain_flows([FlowField.uniform(8, 8, 1, 0), FlowField.uniform(8, 8, 2, -1)])
        assert np.all(chained.u == 3)
        assert np.all(chained.v == -1)

    def test_single_flow_is_unchanged(self):
        flow = _left_half_flow(8, 4, 2)
        assert np.array_equal(chain_flows([flow]).vectors, flow.vectors)

    def test_zero_first_step_passes_second_through(self):
        second = _left_half_flow(16, 4, 2)
        chained = compose_flows(FlowField.uniform(16, 4, 0, 0), second)
        assert np.array_equal(chained.vectors, second.vectors)

    def test_second_step_is_sampled_where_content_landed(self):
        step = _left_half_flow(16, 4, 2)
        chained = chain_flows([step, step])
        # columns 0..5 stay in the moving half after the first step
        assert np.all(chained.u[:, :6] == 4)
        # columns 6, 7 land on static content
        assert np.all(chained.u[:, 6:8] == 2)
        assert not chained.u[:, 8:].any()

    def test_size_mismatch(self):
        with pytest.raises(ValidationError):
            compose_flows(FlowField.uniform(8, 8, 0, 0), FlowField.uniform(4, 4, 0, 0))

    def test_empty(self):
        with pytest.raises(ValidationError):
            chain_flows([])
