# adave/cli/common.py

"""Options and helpers shared by the subcommands."""

import json
from pathlib import Path
from typing import Any, List, Optional, Tuple, Union

import click
from pydantic import BaseModel

from adave.utils import MediaIOError

PathLike = Union[str, Path]


def parse_int_list(ctx, param, value: Optional[str]) -> Optional[List[int]]:
    """Click callback for comma-separated integers, e.g. '16,8'."""
    if value is None:
        return None
    try:
        items = [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}")
    if not items:
        raise click.BadParameter("expected at least one integer")
    return items


def parse_int_pair(ctx, param, value: Optional[str]) -> Optional[Tuple[int, int]]:
    items = parse_int_list(ctx, param, value)
    if items is None:
        return None
    if len(items) != 2:
        raise click.BadParameter(f"expected two integers 'x,y', got {value!r}")
    return items[0], items[1]


workers_option = click.option(
    "--workers",
    type=click.IntRange(min=1),
    default=None,
    help="Worker threads (default: available parallelism)",
)

seed_option = click.option("--seed", type=int, default=None, help="Seed for every random choice")


def write_json(payload: Any, path: PathLike) -> Path:
    """Write a model or plain structure as indented JSON."""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2) + "\n")
    except OSError as e:
        raise MediaIOError(f"Failed to write JSON: {e}", {"path": str(path)}) from e
    return path
