# adave/services/pipeline/runner.py

"""
Two-pass editing run.

    preprocess          reference selection, flow, mask pyramid
    joint_edit_pass     reference frames with SESA; fills and seals the cache
    intermediate_pass   remaining frames with IFSA against the sealed cache
"""

import hashlib
import time
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from adave.models import (
    BlockReport,
    EditConfig,
    Frame,
    LatentGrid,
    MaskPyramid,
    MaskSummary,
    PhaseTimings,
    RunReport,
    ScheduleConfig,
)
from adave.services.attention import build_sparse_kv, ifsa, kv_token_count, sesa
from adave.services.cache import KVCache
from adave.services.masks import build_mask_pyramid
from adave.services.media import read_frame_sequence
from adave.utils import (
    CacheNotSealedError,
    InvariantError,
    ValidationError,
    get_logger,
    map_with_workers,
    resolve_workers,
)

from .denoiser import SyntheticDenoiser
from .scene import render_scene
from .schedule import flatten_order, full_frame_indices, hierarchical_order, select_reference_frames

logger = get_logger(__name__)


class EditResult(BaseModel):
    """Edited states of every frame, plus what produced them."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    latents: List[LatentGrid]
    report: RunReport
    cache: KVCache
    masks: Optional[MaskPyramid] = None


def load_frames(cfg: EditConfig) -> List[Frame]:
    """
    Frames from the PNG directory, or rendered from the synthetic scene.

    Raises:
        ValidationError: Neither source configured, or N disagrees with the schedule
    """
    if cfg.frames_dir:
        frames = read_frame_sequence(cfg.frames_dir)
    elif cfg.scene is not None:
        frames = render_scene(cfg.scene)
    else:
        raise ValidationError("Configure either frames_dir or scene")
    if len(frames) != cfg.schedule.total_frames:
        raise ValidationError(
            "Frame count differs from schedule.total_frames",
            {"frames": len(frames), "total_frames": cfg.schedule.total_frames},
        )
    return frames


def preprocess(
    frames: Sequence[Frame], cfg: EditConfig, workers: Optional[int] = 1
) -> Tuple[List[int], Optional[MaskPyramid]]:
    """
    Reference frame numbers R and the mask pyramid over them (None when Z = 1).
    """
    reference = select_reference_frames(len(frames), cfg.schedule.reference_interval)
    if len(reference) < 2:
        return reference, None
    pyramid = build_mask_pyramid(
        [frames[n - 1] for n in reference],
        cfg.schedule.resolutions,
        flow_settings=cfg.flow,
        mask_settings=cfg.masks,
        reference_numbers=reference,
        workers=workers,
    )
    return reference, pyramid


def joint_edit_pass(
    ref_latents: Sequence[LatentGrid],
    masks: Optional[MaskPyramid],
    schedule: ScheduleConfig,
    denoiser: SyntheticDenoiser,
    cache: KVCache,
    workers: Optional[int] = 1,
) -> List[LatentGrid]:
    """
    Edit the reference frames jointly.

    For every timestep (descending) and block: project all references, build
    the sparse KV, cache it, attend each frame's queries to it and mix. The
    cache is sealed at the end.

    Raises:
        InvariantError: Cache not empty, or already sealed
        DuplicateKeyError: A (timestep, block) written twice
        ValidationError: A mask is missing
    """
    if cache.sealed or len(cache):
        raise InvariantError("Joint pass needs an empty, unsealed cache", {"entries": len(cache)})

    states = sorted((lat.copy_state() for lat in ref_latents), key=lambda s: s.frame_index)
    frame_ids = [s.frame_index for s in states]
    head_count = denoiser.head_count

    for t in schedule.timesteps:
        for j, block in enumerate(denoiser.blocks):
            projected = map_with_workers(
                lambda s: denoiser.project(s.tokens[j], j), states, workers
            )
            sparse = build_sparse_kv(
                [k for _, k, _ in projected],
                [v for _, _, v in projected],
                masks.at(block.resolution) if masks is not None else {},
                schedule.full_frame_interval,
                frame_ids=frame_ids,
            )
            cache.put(t, j, sparse)
            attended = map_with_workers(
                lambda qkv: sesa(qkv[0], sparse, block.dim, head_count), projected, workers
            )
            for state, out in zip(states, attended):
                state.tokens[j] = denoiser.mix(state.tokens[j], out, j)
        for state in states:
            state.timestep = t
        logger.debug("Joint step done", timestep=t, frames=len(states))

    cache.seal()
    return states


def intermediate_pass(
    int_latents: Sequence[LatentGrid],
    schedule: ScheduleConfig,
    denoiser: SyntheticDenoiser,
    cache: KVCache,
    order: Optional[Sequence[int]] = None,
    workers: Optional[int] = 1,
) -> List[LatentGrid]:
    """
    Edit intermediate frames with IFSA over the sealed cache; nothing is written.

    Args:
        order: Processing order of frame numbers (defaults to ascending)

    Returns:
        Edited states in frame order

    Raises:
        CacheNotSealedError: Cache not sealed
        CacheMissError: Entry missing for a (timestep, block)
    """
    if not int_latents:
        return []
    if not cache.sealed:
        raise CacheNotSealedError("Intermediate pass started before the cache was sealed")

    by_frame: Dict[int, LatentGrid] = {lat.frame_index: lat for lat in int_latents}
    order = list(order) if order is not None else sorted(by_frame)
    if sorted(order) != sorted(by_frame):
        raise ValidationError("Processing order must list every intermediate frame once")
    head_count = denoiser.head_count

    def _edit(frame_number: int) -> LatentGrid:
        state = by_frame[frame_number].copy_state()
        for t in schedule.timesteps:
            for j, block in enumerate(denoiser.blocks):
                q = denoiser.project_query(state.tokens[j], j)
                out = ifsa(q, cache.get(t, j), block.dim, head_count)
                state.tokens[j] = denoiser.mix(state.tokens[j], out, j)
            state.timestep = t
        return state

    edited = map_with_workers(_edit, order, workers)
    return sorted(edited, key=lambda s: s.frame_index)


def check_two_pass_integrity(
    cache: KVCache, reference: Sequence[int], expected_entries: int
) -> None:
    """
    Raises:
        InvariantError: An intermediate frame leaked into a cached KV, or the entry count is off
    """
    allowed = set(reference)
    for key, kv in cache.items():
        leaked = set(int(f) for f in kv.frames) - allowed
        if leaked:
            raise InvariantError(
                "Non-reference frame in cached KV", {"key": str(key), "frames": sorted(leaked)}
            )
    if len(cache) != expected_entries:
        raise InvariantError(
            "Unexpected cache entry count", {"entries": len(cache), "expected": expected_entries}
        )


def latent_digest(latents: Sequence[LatentGrid]) -> str:
    """SHA-256 over every frame's token bytes, in frame order."""
    digest = hashlib.sha256()
    for lat in sorted(latents, key=lambda s: s.frame_index):
        digest.update(lat.frame_index.to_bytes(4, "little"))
        for tokens in lat.tokens:
            digest.update(tokens.tobytes())
    return digest.hexdigest()


def _block_reports(
    denoiser: SyntheticDenoiser,
    masks: Optional[MaskPyramid],
    schedule: ScheduleConfig,
    cache: KVCache,
    reference_count: int,
) -> List[BlockReport]:
    full = set(full_frame_indices(reference_count, schedule.full_frame_interval))
    reports = []
    for j, block in enumerate(denoiser.blocks):
        popcounts = {}
        if masks is not None:
            popcounts = {
                i: m.popcount for i, m in masks.at(block.resolution).items() if i not in full
            }
        cost = kv_token_count(
            reference_count, block.tokens, popcounts, schedule.full_frame_interval
        )
        cached = cache.get(schedule.timesteps[0], j).length
        if cached != cost.tokens:
            raise InvariantError(
                "Cached KV length disagrees with the cost model",
                {"block": j, "cached": cached, "modeled": cost.tokens},
            )
        reports.append(
            BlockReport(
                block=j,
                resolution=block.rows,
                grid_width=block.cols,
                channels=block.channels,
                tokens_per_frame=block.tokens,
                kv_tokens=cost.tokens,
                full_kv_tokens=cost.full_tokens,
                popcounts=popcounts,
            )
        )
    return reports


def run_pipeline(
    cfg: EditConfig,
    frames: Optional[Sequence[Frame]] = None,
    workers: Optional[int] = None,
    intermediate_order: Optional[Sequence[int]] = None,
) -> EditResult:
    """
    Preprocess, joint pass, intermediate pass; returns states and the run report.

    Args:
        cfg: Run configuration
        frames: Frames to edit (default: loaded from cfg)
        workers: Overrides cfg.workers
        intermediate_order: Overrides the hierarchical processing order

    Raises:
        ValidationError: Bad configuration or inputs
        MediaIOError: Frame or flow files unreadable
        InvariantError: Two-pass discipline breached
    """
    workers = resolve_workers(workers if workers is not None else cfg.workers)
    schedule = cfg.schedule
    timings = PhaseTimings()

    started = time.perf_counter()
    frames = list(frames) if frames is not None else load_frames(cfg)
    if len(frames) != schedule.total_frames:
        raise ValidationError(
            "Frame count differs from schedule.total_frames",
            {"frames": len(frames), "total_frames": schedule.total_frames},
        )
    reference, masks = preprocess(frames, cfg, workers)
    denoiser = SyntheticDenoiser(schedule, frames[0].height, frames[0].width, cfg.head_count)
    latents = [denoiser.initial_latent(f, n) for n, f in enumerate(frames, start=1)]
    timings.preprocess_s = time.perf_counter() - started
    logger.info(
        "Preprocessed video",
        frames=len(frames),
        reference_frames=len(reference),
        masks=len(masks) if masks is not None else 0,
    )

    started = time.perf_counter()
    cache = KVCache()
    reference_set = set(reference)
    edited_refs = joint_edit_pass(
        [latents[n - 1] for n in reference], masks, schedule, denoiser, cache, workers
    )
    timings.joint_s = time.perf_counter() - started

    started = time.perf_counter()
    levels = hierarchical_order(len(frames), reference)
    order = list(intermediate_order) if intermediate_order is not None else flatten_order(levels)
    edited_ints = intermediate_pass(
        [lat for lat in latents if lat.frame_index not in reference_set],
        schedule,
        denoiser,
        cache,
        order=order,
        workers=workers,
    )
    timings.intermediate_s = time.perf_counter() - started

    check_two_pass_integrity(cache, reference, len(schedule.timesteps) * len(denoiser.blocks))
    edited = sorted(edited_refs + edited_ints, key=lambda s: s.frame_index)

    blocks = _block_reports(denoiser, masks, schedule, cache, len(reference))
    steps = len(schedule.timesteps)
    per_frame_flops = sum(
        kv_token_count(
            len(reference),
            b.tokens_per_frame,
            b.popcounts,
            schedule.full_frame_interval,
            dim=b.channels,
        ).flops
        for b in blocks
    )
    stats = cache.stats()
    report = RunReport(
        total_frames=len(frames),
        reference_frames=reference,
        reference_count=len(reference),
        full_frame_ranks=full_frame_indices(len(reference), schedule.full_frame_interval),
        intermediate_order=levels,
        blocks=blocks,
        timesteps=list(schedule.timesteps),
        cache_entries=len(cache),
        cache_bytes=stats.total_bytes,
        joint_attention_flops=steps * len(reference) * per_frame_flops,
        intermediate_attention_flops=steps * len(edited_ints) * per_frame_flops,
        mask_summary=MaskSummary.from_pyramid(masks, reference) if masks is not None else None,
        output_digest=latent_digest(edited),
        workers=workers,
        timings=timings,
    )
    logger.info(
        "Edit run complete",
        reference_frames=len(reference),
        intermediate_frames=len(edited_ints),
        cache_entries=len(cache),
        digest=report.output_digest[:12],
    )
    return EditResult(latents=edited, report=report, cache=cache, masks=masks)
