# adave/tests/test_config.py

"""Tests for process settings, run-config loading and config model validation."""

import json

import pytest

from adave.config import Settings
from adave.config.loader import load_config, merge_overrides, read_config_document
from adave.models import BenchConfig, EditConfig, FlowSettings, ScheduleConfig
from adave.utils import ConfigError, MediaIOError


class TestSettings:
    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("ADAVE_LOG", raising=False)
        s = Settings(_env_file=None)
        assert s.log_level == "WARNING"
        assert s.workers is None
        assert s.attention_chunk_rows == 256
        assert s.kv_layout_version == 1

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("ADAVE_LOG", "debug")
        monkeypatch.setenv("ADAVE_WORKERS", "3")
        monkeypatch.setenv("ADAVE_FLOW_BLOCK", "4")
        s = Settings(_env_file=None)
        assert s.log_level == "debug"
        assert s.workers == 3
        assert s.flow_block == 4


class TestLoader:
    def test_no_path_is_empty(self):
        assert read_config_document(None) == {}

    def test_overrides_win_and_none_is_skipped(self):
        document = {"schedule": {"seed": 1, "total_frames": 4}, "head_count": 2}
        merged = merge_overrides(
            document, {"schedule.seed": 9, "head_count": None, "flow.block": 4}
        )
        assert merged == {
            "schedule": {"seed": 9, "total_frames": 4},
            "head_count": 2,
            "flow": {"block": 4},
        }
        # input untouched
        assert document["schedule"]["seed"] == 1

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "bench.json"
        path.write_text(json.dumps({"frames": 4, "tokens": 16, "dim": 8}))
        cfg = load_config(BenchConfig, path, {"density": 0.5})
        assert (cfg.frames, cfg.tokens, cfg.dim, cfg.density) == (4, 16, 8, 0.5)

    def test_validation_errors_are_listed(self):
        with pytest.raises(ConfigError) as exc:
            load_config(BenchConfig, None, {"frames": 0, "repetitions": 1})
        assert len(exc.value.errors) == 2
        assert any(e.startswith("frames") for e in exc.value.errors)

    def test_not_an_object(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        with pytest.raises(ConfigError):
            read_config_document(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(MediaIOError):
            read_config_document(tmp_path / "absent.json")


class TestConfigModels:
    def test_schedule_blocks(self):
        schedule = ScheduleConfig(total_frames=4, resolutions=[16, 8], channels=[8, 16])
        assert schedule.blocks == [(16, 8), (8, 16)]

    def test_default_timesteps_descend(self):
        timesteps = ScheduleConfig(total_frames=2).timesteps
        assert len(timesteps) == 50
        assert timesteps[-1] == 0
        assert all(a > b for a, b in zip(timesteps, timesteps[1:]))

    def test_blocks_must_pair_up(self):
        with pytest.raises(ValueError):
            ScheduleConfig(total_frames=2, resolutions=[16, 8], channels=[8])

    def test_flo_dir_required(self):
        with pytest.raises(ValueError):
            FlowSettings(source="flo_dir")

    def test_heads_divide_channels(self):
        with pytest.raises(ValueError):
            EditConfig(schedule=ScheduleConfig(total_frames=2, channels=[6, 8]), head_count=4)

    def test_bench_limits(self):
        with pytest.raises(ValueError):
            BenchConfig(dim=10, head_count=4)
        with pytest.raises(ValueError):
            BenchConfig(frames=2, query_frames=3)
