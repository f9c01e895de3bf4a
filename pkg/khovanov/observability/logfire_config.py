"""
Structured logging to stderr, with Logfire forwarding when a token is set.
stdout stays reserved for reports.
"""

import logging
import sys
import time
from contextlib import contextmanager, nullcontext
from typing import Any, Iterator

import logfire
import structlog

from khovanov.config import get_settings


def configure_structlog(level: str = "WARNING") -> None:
    """Route structlog through stdlib logging on stderr at ``level``."""
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, level.upper(), logging.WARNING),
        force=True,
    )
    renderer = (
        structlog.dev.ConsoleRenderer(colors=True)
        if sys.stderr.isatty()
        else structlog.processors.JSONRenderer(sort_keys=True)
    )
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.format_exc_info,
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


logger = structlog.get_logger(__name__)

_initialized = False


def initialize_logfire() -> None:
    """Initialize Logfire once, only when LOGFIRE_TOKEN is configured."""
    global _initialized
    if _initialized:
        return

    settings = get_settings()
    if not settings.logfire_token:
        return

    logfire.configure(
        token=settings.logfire_token,
        service_name="khovanov-gen",
        console=False,
    )
    _initialized = True


def log_event(event: str, **kwargs: Any) -> None:
    if _initialized:
        logfire.info(event, **kwargs)
    logger.info(event, **kwargs)


def log_error(event: str, **kwargs: Any) -> None:
    if _initialized:
        logfire.error(event, **kwargs)
    logger.error(event, **kwargs)


def log_warning(event: str, **kwargs: Any) -> None:
    if _initialized:
        logfire.warn(event, **kwargs)
    logger.warning(event, **kwargs)


def log_debug(event: str, **kwargs: Any) -> None:
    if _initialized:
        logfire.debug(event, **kwargs)
    logger.debug(event, **kwargs)


@contextmanager
def timed(stage: str, **kwargs: Any) -> Iterator[dict[str, Any]]:
    """
    Time a pipeline stage.

    Opens a Logfire span while Logfire is active and logs ``stage`` at
    debug level with ``elapsed_ms`` on exit. Keys put into the yielded
    dict are logged alongside.
    """
    extra: dict[str, Any] = {}
    start = time.perf_counter()
    with logfire.span(stage, **kwargs) if _initialized else nullcontext():
        yield extra
    elapsed_ms = round((time.perf_counter() - start) * 1000, 1)
    logger.debug(stage, elapsed_ms=elapsed_ms, **kwargs, **extra)
