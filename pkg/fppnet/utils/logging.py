"""Structured logging for fppnet, built on structlog."""

import logging
import os
import sys
from typing import Optional

import structlog
from dotenv import load_dotenv

LOG_LEVEL_ENV = "FPPNET_LOG_LEVEL"

_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def default_level() -> str:
    """Resolve the log level from the environment (``.env`` honoured).

    Returns:
        ``FPPNET_LOG_LEVEL`` if set to a known level, otherwise ``"WARNING"``.
    """
    load_dotenv()
    level = os.getenv(LOG_LEVEL_ENV, "WARNING").upper()
    return level if level in _LEVELS else "WARNING"


def configure_logging(
    level: Optional[str] = None,
    json_output: bool = False,
    output_file: Optional[str] = None,
) -> None:
    """Configure structlog and the stdlib root logger for fppnet.

    Experiment runs are long; the console renderer is for people watching a
    terminal, the JSON renderer for runs whose logs are collected next to
    their result files.

    Args:
        level: Log level ("DEBUG", "INFO", "WARNING", "ERROR"). Defaults to
            :func:`default_level`.
        json_output: If True, render events as JSON lines.
        output_file: Optional file path that receives every event as a JSON line,
            whatever the console renderer.
    """
    level = level or default_level()
    level_value = getattr(logging, level.upper(), logging.WARNING)

    shared = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.add_log_level,
        structlog.stdlib.add_logger_name,
        structlog.processors.TimeStamper(fmt="iso"),
    ]
    renderer = (
        structlog.processors.JSONRenderer()
        if json_output
        else structlog.dev.ConsoleRenderer(
            colors=sys.stderr.isatty(),
            exception_formatter=structlog.dev.plain_traceback,
        )
    )

    structlog.configure(
        processors=[
            *shared,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level_value)
    console_handler.setFormatter(
        structlog.stdlib.ProcessorFormatter(
            foreign_pre_chain=shared,
            processors=[
                structlog.stdlib.ProcessorFormatter.remove_processors_meta,
                renderer,
            ],
        )
    )
    handlers: list[logging.Handler] = [console_handler]

    if output_file:
        file_handler = logging.FileHandler(output_file, encoding="utf-8")
        file_handler.setLevel(level_value)
        file_handler.setFormatter(
            structlog.stdlib.ProcessorFormatter(
                foreign_pre_chain=shared,
                processors=[
                    structlog.stdlib.ProcessorFormatter.remove_processors_meta,
                    structlog.processors.JSONRenderer(),
                ],
            )
        )
        handlers.append(file_handler)

    root_logger = logging.getLogger()
    for old in root_logger.handlers:
        old.close()
    root_logger.handlers.clear()
    for handler in handlers:
        root_logger.addHandler(handler)
    root_logger.setLevel(level_value)


def get_logger(name: Optional[str] = None) -> structlog.stdlib.BoundLogger:
    """Get a structlog logger.

    Args:
        name: Logger name (typically ``__name__``).

    Returns:
        A structlog bound logger instance.
    """
    return structlog.get_logger(name)


def set_log_level(level: str) -> None:
    """Change the root log level at runtime.

    Args:
        level: Log level ("DEBUG", "INFO", "WARNING", "ERROR").
    """
    level_value = getattr(logging, level.upper(), logging.WARNING)
    root_logger = logging.getLogger()
    root_logger.setLevel(level_value)
    for handler in root_logger.handlers:
        handler.setLevel(level_value)
