# adave/config/loader.py

"""
Run-configuration documents: a JSON file merged with command-line overrides
(overrides win), validated into a pydantic model.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Type, TypeVar, Union

import pydantic

from adave.utils import ConfigError, MediaIOError, get_logger

logger = get_logger(__name__)

M = TypeVar("M", bound=pydantic.BaseModel)

PathLike = Union[str, Path]


def read_config_document(path: Optional[PathLike]) -> Dict[str, Any]:
    """
    Parse a JSON config file ({} when no path is given).

    Raises:
        MediaIOError: File unreadable
        ConfigError: Not a JSON object
    """
    if path is None:
        return {}
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise MediaIOError(f"Failed to read config: {e}", {"path": str(path)}) from e
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config is not valid JSON: {path}", [str(e)]) from e
    if not isinstance(document, dict):
        raise ConfigError(f"Config must be a JSON object: {path}")
    return document


def merge_overrides(document: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """
    Deep-merge overrides into a copy of the document; None values are skipped.

    Nested keys use dotted paths, e.g. {"schedule.seed": 3}.
    """
    merged = json.loads(json.dumps(document))
    for dotted, value in overrides.items():
        if value is None:
            continue
        *parents, leaf = dotted.split(".")
        node = merged
        for part in parents:
            child = node.get(part)
            if not isinstance(child, dict):
                child = node[part] = {}
            node = child
        node[leaf] = value
    return merged


def validate_config(model: Type[M], document: Dict[str, Any]) -> M:
    """
    Raises:
        ConfigError: Listing every validation failure
    """
    try:
        return model.model_validate(document)
    except pydantic.ValidationError as e:
        errors = [
            f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}"
            for err in e.errors()
        ]
        raise ConfigError(f"Invalid {model.__name__}", errors) from e


def load_config(
    model: Type[M], path: Optional[PathLike] = None, overrides: Optional[Dict[str, Any]] = None
) -> M:
    document = merge_overrides(read_config_document(path), overrides or {})
    config = validate_config(model, document)
    logger.debug("Loaded config", model=model.__name__, path=str(path) if path else None)
    return config
