"""Tests for logging setup."""

import logging


def test_setup_logging_is_idempotent():
    """Repeated calls keep one handler per package logger and update the level."""
    from utils.logging_config import PACKAGE_LOGGERS, setup_logging

    setup_logging("INFO")
    setup_logging("DEBUG")
    for name in PACKAGE_LOGGERS:
        logger = logging.getLogger(name)
        assert len(logger.handlers) == 1
        assert logger.level == logging.DEBUG
    setup_logging("WARNING")


def test_unknown_level_falls_back_to_info():
    from utils.logging_config import setup_logging

    setup_logging("chatty")
    assert logging.getLogger("core").level == logging.INFO
    setup_logging("WARNING")
