# adave/config/settings.py

"""
Central configuration management for the adave engine.
Loads process-wide defaults from environment variables (prefix ADAVE_) and an
optional .env file; per-run parameters live in the JSON documents described
by adave.models.config.
"""

from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Main settings class for the application.
    Every field has a default, so the engine runs without any environment.
    """

    model_config = SettingsConfigDict(
        env_prefix="ADAVE_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        populate_by_name=True,
    )

    # Logging (ADAVE_LOG)
    log_level: str = Field(default="WARNING", validation_alias="ADAVE_LOG")
    # auto: console renderer on a terminal, JSON lines otherwise
    log_format: Literal["auto", "console", "json"] = "auto"

    # Worker pool; None means available parallelism
    workers: Optional[int] = None

    # Built-in block-matching flow estimator
    flow_block: int = 8
    flow_radius: int = 8

    # Flow colour coding: max magnitudes below this normalise by 1
    flow_colour_epsilon: float = 1e-6

    # Attention kernels evaluate queries in fixed-size row chunks
    attention_chunk_rows: int = 256

    # SparseKV / KV cache wire format
    kv_layout_version: int = 1

    # Benchmark defaults
    bench_warmup: int = 3
    bench_repetitions: int = 5

    # Default diffusion schedule length
    default_timesteps: int = 50


# Singleton instance
settings = Settings()
