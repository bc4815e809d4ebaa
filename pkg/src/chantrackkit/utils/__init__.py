from .seeding import trial_rng
from .log import configure_logging, resolve_log_level, LOG_LEVEL_ENV
from .metrics import DB_FLOOR, to_db, mse_metric

__all__ = [
    "trial_rng",
    "configure_logging",
    "resolve_log_level",
    "LOG_LEVEL_ENV",
    "DB_FLOOR",
    "to_db",
    "mse_metric",
]
