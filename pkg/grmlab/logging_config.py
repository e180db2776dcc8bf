import logging
import sys
from typing import TextIO

from pythonjsonlogger import jsonlogger

LOGGER_NAME = "grmlab"


def configure_logging(level: str = "INFO", stream: TextIO | None = None) -> logging.Logger:
    """Attach a JSON handler to the package logger (idempotent)."""
    logger = logging.getLogger(LOGGER_NAME)
    for existing in list(logger.handlers):
        if getattr(existing, "_grmlab", False):
            logger.removeHandler(existing)
    handler = logging.StreamHandler(stream or sys.stderr)
    fmt = jsonlogger.JsonFormatter("%(asctime)s %(levelname)s %(name)s %(message)s")
    handler.setFormatter(fmt)
    handler._grmlab = True  # type: ignore[attr-defined]
    logger.addHandler(handler)
    logger.setLevel(getattr(logging, level.upper(), logging.INFO))
    return logger
