# adave/services/pipeline/__init__.py

from .schedule import (
    select_reference_frames,
    full_frame_indices,
    hierarchical_order,
    flatten_order,
)
from .scene import render_scene, rect_box, motion_ground_truth, mask_iou
from .denoiser import SyntheticDenoiser, DenoiserBlock, rms_norm
from .runner import (
    EditResult,
    load_frames,
    preprocess,
    joint_edit_pass,
    intermediate_pass,
    check_two_pass_integrity,
    latent_digest,
    run_pipeline,
)

__all__ = [
    "select_reference_frames",
    "full_frame_indices",
    "hierarchical_order",
    "flatten_order",
    "render_scene",
    "rect_box",
    "motion_ground_truth",
    "mask_iou",
    "SyntheticDenoiser",
    "DenoiserBlock",
    "rms_norm",
    "EditResult",
    "load_frames",
    "preprocess",
    "joint_edit_pass",
    "intermediate_pass",
    "check_two_pass_integrity",
    "latent_digest",
    "run_pipeline",
]
