"""Logging configuration for hawkes-mml."""

import logging
import sys
from typing import Optional

from tqdm import tqdm

from hawkes_mml.utils.errors import ValidationError

PACKAGE_LOGGER = "hawkes_mml"
DEFAULT_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class TqdmHandler(logging.StreamHandler):
    """Stderr handler that prints above active tqdm progress bars."""

    def __init__(self) -> None:
        super().__init__(sys.stderr)

    def emit(self, record: logging.LogRecord) -> None:
        try:
            tqdm.write(self.format(record), file=sys.stderr)
        except Exception:
            self.handleError(record)


def setup_logging(level: str = "INFO", format_string: Optional[str] = None) -> logging.Logger:
    """
    Configure the hawkes_mml logger.

    Logs go to stderr only; stdout carries command output.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        format_string: Optional custom format string

    Returns:
        Configured package logger

    Raises:
        ValidationError: If the level name is unknown
    """
    name = str(level).upper()
    if name not in LEVELS:
        raise ValidationError(f"Unknown log level '{level}'. Use one of: {', '.join(LEVELS)}")

    logger = logging.getLogger(PACKAGE_LOGGER)
    logger.setLevel(getattr(logging, name))

    formatter = logging.Formatter(format_string or DEFAULT_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")
    # Reconfiguring replaces the formatter; never stacks handlers
    if logger.handlers:
        for handler in logger.handlers:
            handler.setFormatter(formatter)
    else:
        handler = TqdmHandler()
        handler.setLevel(logging.DEBUG)
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    return logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Package logger, or its child `hawkes_mml.<name>`."""
    if name:
        return logging.getLogger(f"{PACKAGE_LOGGER}.{name}")
    return logging.getLogger(PACKAGE_LOGGER)
