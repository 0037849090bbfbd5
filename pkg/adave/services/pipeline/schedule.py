# adave/services/pipeline/schedule.py

"""Reference-frame sampling and the processing order of intermediate frames."""

from typing import Iterable, List

from adave.services.attention.sparse_kv import full_frame_indices
from adave.utils import ValidationError

__all__ = ["select_reference_frames", "full_frame_indices", "hierarchical_order", "flatten_order"]


def select_reference_frames(total_frames: int, interval: int) -> List[int]:
    """
    {1, 1+s, 1+2s, ...} plus N, as 1-based frame numbers.

    Raises:
        ValidationError: If N < 1 or s < 1
    """
    if total_frames < 1 or interval < 1:
        raise ValidationError("N and s must be positive", {"N": total_frames, "s": interval})
    return sorted({*range(1, total_frames + 1, interval), total_frames})


def hierarchical_order(total_frames: int, reference_frames: Iterable[int]) -> List[List[int]]:
    """
    Midpoint bisection levels over the frames not in R.

    Level 0 (R itself) is omitted. Each level holds floor((a+b)/2) for every
    adjacent scheduled pair (a, b) with a gap above 1, ascending. Virtual
    anchors 0 and N+1 bound the range.

    Raises:
        ValidationError: If R is not a subset of 1..N
    """
    scheduled = set(reference_frames)
    if any(not 1 <= i <= total_frames for i in scheduled):
        raise ValidationError("Reference frames must lie in 1..N", {"N": total_frames})

    levels: List[List[int]] = []
    while True:
        points = sorted(scheduled | {0, total_frames + 1})
        level = [(a + b) // 2 for a, b in zip(points, points[1:]) if b - a > 1]
        if not level:
            return levels
        levels.append(level)
        scheduled.update(level)


def flatten_order(levels: List[List[int]]) -> List[int]:
    return [i for level in levels for i in level]
