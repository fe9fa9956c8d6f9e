"""Structured logging configuration."""

from __future__ import annotations

import logging
import sys

PACKAGE_LOGGERS = ("core", "features", "cli")


def setup_logging(level: int | str = logging.INFO) -> logging.Logger:
    """Attach one stderr handler to each package logger tree; idempotent."""
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO

    formatter = logging.Formatter(
        fmt="%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
        datefmt="%H:%M:%S",
    )
    for name in PACKAGE_LOGGERS:
        logger = logging.getLogger(name)
        logger.setLevel(level)
        if logger.handlers:
            for h in logger.handlers:
                h.setLevel(level)
            continue
        handler = logging.StreamHandler(sys.stderr)
        handler.setLevel(level)
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.propagate = False
    return logging.getLogger("cli")
