# Standard Libraries
import logging
import os
from typing import Optional

LOG_LEVEL_ENV = "CHANTRACKKIT_LOG_LEVEL"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def resolve_log_level(level: Optional[str] = None) -> int:
    """
    Explicit level first, then the CHANTRACKKIT_LOG_LEVEL variable, then
    WARNING.
    """
    name = level or os.environ.get(LOG_LEVEL_ENV) or "WARNING"
    resolved = logging.getLevelName(name.upper())
    if not isinstance(resolved, int):
        raise ValueError(f"Unknown log level: {name}")
    return resolved


def configure_logging(level: Optional[str] = None) -> None:
    logging.basicConfig(
        level=resolve_log_level(level), format=LOG_FORMAT, force=True
    )
