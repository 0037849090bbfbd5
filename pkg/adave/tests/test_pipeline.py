# adave/tests/test_pipeline.py

"""Tests for reference scheduling, the synthetic denoiser and the two-pass run."""

import numpy as np
import pytest

from adave.models import LatentGrid, ScheduleConfig
from adave.services.attention import extend_kv_full, self_attention
from adave.services.cache import KVCache
from adave.services.pipeline import (
    SyntheticDenoiser,
    flatten_order,
    hierarchical_order,
    intermediate_pass,
    joint_edit_pass,
    latent_digest,
    preprocess,
    render_scene,
    run_pipeline,
    select_reference_frames,
)
from adave.utils import CacheNotSealedError, InvariantError, ValidationError


def _schedule(frames, interval=2, timesteps=(980, 490, 0), seed=0) -> ScheduleConfig:
    return ScheduleConfig(
        total_frames=frames,
        full_frame_interval=interval,
        timesteps=list(timesteps),
        seed=seed,
        resolutions=[16, 8],
        channels=[16, 32],
    )


class TestSchedule:
    @pytest.mark.parametrize(
        "total,interval,expected",
        [(10, 3, [1, 4, 7, 10]), (10, 4, [1, 5, 9, 10]), (1, 1, [1]), (5, 5, [1, 5])],
    )
    def test_reference_frames(self, total, interval, expected):
        assert select_reference_frames(total, interval) == expected

    def test_hierarchical_order(self):
        assert hierarchical_order(9, [1, 5, 9]) == [[3, 7], [2, 4, 6, 8]]
        assert hierarchical_order(6, [1, 6]) == [[3], [2, 4], [5]]
        assert hierarchical_order(4, [1, 2, 3, 4]) == []

    def test_order_covers_intermediates_once(self):
        for total in range(1, 30):
            for interval in range(1, total + 1):
                reference = select_reference_frames(total, interval)
                order = flatten_order(hierarchical_order(total, reference))
                assert sorted(order) == sorted(set(range(1, total + 1)) - set(reference))

    def test_reference_out_of_range(self):
        with pytest.raises(ValidationError):
            hierarchical_order(4, [0, 4])

    def test_schedule_validation(self):
        with pytest.raises(ValueError):
            ScheduleConfig(total_frames=4, timesteps=[0, 980])
        with pytest.raises(ValueError):
            ScheduleConfig(total_frames=4, reference_interval=5)


class TestDenoiser:
    def test_block_geometry(self):
        denoiser = SyntheticDenoiser(_schedule(2), 64, 64)
        assert [(b.rows, b.cols, b.channels) for b in denoiser.blocks] == [(16, 16, 16), (8, 8, 32)]
        assert denoiser.blocks[0].tokens == 256

    def test_seeded_weights(self):
        a = SyntheticDenoiser(_schedule(2, seed=5), 32, 32)
        b = SyntheticDenoiser(_schedule(2, seed=5), 32, 32)
        c = SyntheticDenoiser(_schedule(2, seed=6), 32, 32)
        assert np.array_equal(a.blocks[0].w_mix, b.blocks[0].w_mix)
        assert not np.array_equal(a.blocks[0].w_mix, c.blocks[0].w_mix)

    def test_identical_frames_identical_latents(self, static_scene):
        frames = render_scene(static_scene)
        denoiser = SyntheticDenoiser(_schedule(6), 64, 64)
        first = denoiser.initial_latent(frames[0], 1)
        second = denoiser.initial_latent(frames[1], 2)
        assert first.same_bytes(second)
        assert [t.shape for t in first.tokens] == [(256, 16), (64, 32)]

    def test_resolution_too_large(self):
        with pytest.raises(ValidationError):
            SyntheticDenoiser(_schedule(2), 8, 8)


class TestJointPass:
    def _inputs(self, scene, schedule, reference):
        frames = render_scene(scene)
        denoiser = SyntheticDenoiser(schedule, scene.height, scene.width)
        latents = [denoiser.initial_latent(frames[n - 1], n) for n in reference]
        return frames, denoiser, latents

    def test_fills_and_seals_cache(self, half_moving_scene, edit_config_factory):
        cfg = edit_config_factory(half_moving_scene)
        frames = render_scene(half_moving_scene)
        reference, masks = preprocess(frames, cfg)
        denoiser = SyntheticDenoiser(cfg.schedule, 64, 64)
        latents = [denoiser.initial_latent(frames[n - 1], n) for n in reference]
        cache = KVCache()
        edited = joint_edit_pass(latents, masks, cfg.schedule, denoiser, cache)
        assert cache.sealed
        assert len(cache) == 3 * 2
        assert [s.frame_index for s in edited] == reference
        assert all(s.timestep == 0 for s in edited)
        # inputs are not mutated
        assert all(lat.timestep is None for lat in latents)

    def test_single_reference_frame(self, half_moving_scene):
        schedule = _schedule(1, timesteps=(980, 0))
        _, denoiser, latents = self._inputs(half_moving_scene, schedule, [1])
        cache = KVCache()
        joint_edit_pass(latents, None, schedule, denoiser, cache)
        assert len(cache) == 2
        assert cache.get(980, 0).length == 256

    def test_needs_fresh_cache(self, half_moving_scene):
        schedule = _schedule(1, timesteps=(980, 0))
        _, denoiser, latents = self._inputs(half_moving_scene, schedule, [1])
        cache = KVCache()
        cache.seal()
        with pytest.raises(InvariantError):
            joint_edit_pass(latents, None, schedule, denoiser, cache)

    def test_full_interval_one_matches_full_extension(self, half_moving_scene):
        schedule = _schedule(4, interval=1, timesteps=(980, 0))
        frames, denoiser, latents = self._inputs(half_moving_scene, schedule, [1, 2, 3, 4])
        edited = joint_edit_pass(latents, None, schedule, denoiser, KVCache())

        states = [lat.copy_state() for lat in latents]
        for _ in schedule.timesteps:
            for j, block in enumerate(denoiser.blocks):
                projected = [denoiser.project(s.tokens[j], j) for s in states]
                full = extend_kv_full([k for _, k, _ in projected], [v for _, _, v in projected])
                for s, (q, _, _) in zip(states, projected):
                    out = self_attention(q, full.keys, full.values, block.dim)
                    s.tokens[j] = denoiser.mix(s.tokens[j], out, j)

        for got, want in zip(edited, states):
            for a, b in zip(got.tokens, want.tokens):
                np.testing.assert_allclose(a, b, atol=1e-5)


class TestIntermediatePass:
    def _sealed(self, scene, schedule, reference):
        frames = render_scene(scene)
        denoiser = SyntheticDenoiser(schedule, scene.height, scene.width)
        latents = [denoiser.initial_latent(f, n) for n, f in enumerate(frames, start=1)]
        cache = KVCache()
        edited = joint_edit_pass(
            [latents[n - 1] for n in reference], None, schedule, denoiser, cache
        )
        return denoiser, latents, cache, edited

    def test_no_intermediates(self):
        assert intermediate_pass([], _schedule(2), None, KVCache()) == []

    def test_requires_sealed_cache(self, static_scene):
        schedule = _schedule(6, interval=1, timesteps=(980, 0))
        denoiser = SyntheticDenoiser(schedule, 64, 64)
        latent = denoiser.initial_latent(render_scene(static_scene)[0], 2)
        with pytest.raises(CacheNotSealedError):
            intermediate_pass([latent], schedule, denoiser, KVCache())

    def test_identical_frame_reproduces_reference_bitwise(self, static_scene):
        schedule = _schedule(6, interval=1, timesteps=(980, 490, 0))
        denoiser, latents, cache, edited = self._sealed(static_scene, schedule, [1, 6])
        out = intermediate_pass([latents[2]], schedule, denoiser, cache)
        assert out[0].frame_index == 3
        assert out[0].same_bytes(edited[0])

    def test_processing_order_does_not_matter(self, half_moving_scene):
        schedule = _schedule(4, interval=1, timesteps=(980, 0))
        denoiser, latents, cache, _ = self._sealed(half_moving_scene, schedule, [1, 4])
        forward = intermediate_pass(latents[1:3], schedule, denoiser, cache, order=[2, 3])
        backward = intermediate_pass(latents[1:3], schedule, denoiser, cache, order=[3, 2])
        assert latent_digest(forward) == latent_digest(backward)

    def test_writes_nothing(self, half_moving_scene):
        schedule = _schedule(4, interval=1, timesteps=(980, 0))
        denoiser, latents, cache, _ = self._sealed(half_moving_scene, schedule, [1, 4])
        before = cache.stats()
        intermediate_pass(latents[1:3], schedule, denoiser, cache, workers=2)
        assert cache.stats() == before

    def test_bad_order(self, half_moving_scene):
        schedule = _schedule(4, interval=1, timesteps=(980, 0))
        denoiser, latents, cache, _ = self._sealed(half_moving_scene, schedule, [1, 4])
        with pytest.raises(ValidationError):
            intermediate_pass(latents[1:3], schedule, denoiser, cache, order=[2])


class TestRunPipeline:
    def test_deterministic(self, half_moving_scene, edit_config_factory):
        cfg = edit_config_factory(half_moving_scene)
        first = run_pipeline(cfg, workers=1)
        second = run_pipeline(cfg, workers=1)
        assert first.report.deterministic_dump() == second.report.deterministic_dump()

    def test_worker_count_invariant(self, half_moving_scene, edit_config_factory):
        cfg = edit_config_factory(half_moving_scene, reference_interval=3)
        one = run_pipeline(cfg, workers=1)
        four = run_pipeline(cfg, workers=4)
        assert one.report.output_digest == four.report.output_digest
        assert one.report.deterministic_dump() == four.report.deterministic_dump()

    def test_four_heads(self, half_moving_scene, edit_config_factory):
        cfg = edit_config_factory(half_moving_scene, reference_interval=3, head_count=4)
        one = run_pipeline(cfg, workers=1)
        four = run_pipeline(cfg, workers=4)
        assert one.report.output_digest == four.report.output_digest
        assert one.report.cache_entries == 3 * 2
        single = run_pipeline(
            edit_config_factory(half_moving_scene, reference_interval=3), workers=1
        )
        assert one.report.output_digest != single.report.output_digest

    def test_seed_changes_output(self, half_moving_scene, edit_config_factory):
        a = run_pipeline(edit_config_factory(half_moving_scene, seed=0), workers=1)
        b = run_pipeline(edit_config_factory(half_moving_scene, seed=1), workers=1)
        assert a.report.output_digest != b.report.output_digest

    def test_zero_motion_keeps_only_full_frames(self, static_scene, edit_config_factory):
        result = run_pipeline(edit_config_factory(static_scene), workers=1)
        report = result.report
        assert report.full_frame_ranks == [1, 2, 4, 6]
        for block in report.blocks:
            assert block.kv_tokens == 4 * block.tokens_per_frame
        first = result.latents[0]
        assert all(lat.same_bytes(first) for lat in result.latents)

    def test_cache_holds_only_reference_frames(self, half_moving_scene, edit_config_factory):
        cfg = edit_config_factory(half_moving_scene, reference_interval=4)
        result = run_pipeline(cfg, workers=1)
        assert result.report.reference_frames == [1, 4]
        for _, kv in result.cache.items():
            assert set(kv.frames.tolist()) <= {1, 4}
        assert len(result.latents) == 4
        assert result.report.cache_entries == 3 * 2

    def test_interval_equal_to_frame_count(self, static_scene, edit_config_factory):
        result = run_pipeline(edit_config_factory(static_scene, reference_interval=6), workers=1)
        assert result.report.reference_frames == [1, 6]
        assert result.report.intermediate_order == [[3], [2, 4], [5]]

    def test_flops_follow_cost_model(self, half_moving_scene, edit_config_factory):
        report = run_pipeline(edit_config_factory(half_moving_scene), workers=1).report
        per_frame = sum(
            b.tokens_per_frame * b.kv_tokens * (4 * b.channels + 1) for b in report.blocks
        )
        assert report.joint_attention_flops == 3 * 4 * per_frame
        assert report.intermediate_attention_flops == 0

    def test_frame_count_mismatch(self, half_moving_scene, edit_config_factory):
        cfg = edit_config_factory(half_moving_scene)
        with pytest.raises(ValidationError):
            run_pipeline(cfg, frames=render_scene(half_moving_scene)[:3], workers=1)

    def test_explicit_order_override(self, half_moving_scene, edit_config_factory):
        cfg = edit_config_factory(half_moving_scene, reference_interval=4)
        default = run_pipeline(cfg, workers=1)
        reversed_ = run_pipeline(cfg, workers=1, intermediate_order=[3, 2])
        assert default.report.output_digest == reversed_.report.output_digest


def test_latent_digest_is_order_free():
    a = LatentGrid(frame_index=1, tokens=[np.ones((2, 2), dtype=np.float32)])
    b = LatentGrid(frame_index=2, tokens=[np.zeros((2, 2), dtype=np.float32)])
    assert latent_digest([a, b]) == latent_digest([b, a])
