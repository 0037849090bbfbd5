# adave/utils/logging.py

"""
Structured logging for the adave engine.

Logs go to standard error; command results on standard output stay
machine-readable. The CLI binds the command name once per run and every
event logged during the run carries it.
"""

import logging
import sys
from typing import Any, Optional, TextIO

import numpy as np
import structlog

from adave.config import settings


def numpy_to_builtin(_logger: Any, _method: str, event_dict: dict) -> dict:
    """
    Replace numpy values in an event: scalars become Python numbers, arrays a
    shape/dtype summary.
    """
    for key, value in event_dict.items():
        if isinstance(value, np.generic):
            event_dict[key] = value.item()
        elif isinstance(value, np.ndarray):
            event_dict[key] = f"ndarray{list(value.shape)}:{value.dtype}"
    return event_dict


def select_renderer(log_format: Optional[str] = None, stream: Optional[TextIO] = None):
    """Final processor for ADAVE_LOG_FORMAT; auto picks the console renderer on a terminal."""
    log_format = log_format or settings.log_format
    stream = stream or sys.stderr
    if log_format == "console" or (log_format == "auto" and stream.isatty()):
        return structlog.dev.ConsoleRenderer()
    return structlog.processors.JSONRenderer(sort_keys=True)


def setup_logging(log_level: Optional[str] = None, log_format: Optional[str] = None) -> None:
    """
    Configure structured logging for the application.

    Args:
        log_level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL).
                   If None, uses settings.log_level (env var ADAVE_LOG).
        log_format: auto, console or json; None uses settings.log_format
    """
    level = (log_level or settings.log_level).upper()

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            numpy_to_builtin,
            structlog.processors.format_exc_info,
            select_renderer(log_format, sys.stderr),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, level, logging.WARNING),
        force=True,
    )


def bind_run_context(**fields: Any) -> None:
    """Start a fresh per-run context (e.g. command=masks, workers=4) for all later events."""
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(**{k: v for k, v in fields.items() if v is not None})


def verbosity_to_level(verbose: int) -> Optional[str]:
    """Map a count of -v flags to a log level (None keeps the configured level)."""
    if verbose <= 0:
        return None
    return "INFO" if verbose == 1 else "DEBUG"


def get_logger(name: str) -> structlog.BoundLogger:
    """Logger for a module, e.g. logger = get_logger(__name__)."""
    return structlog.get_logger(name)
