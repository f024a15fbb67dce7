import contextvars
import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from typing import Optional

from app.config import Config

_run_id: contextvars.ContextVar = contextvars.ContextVar("run_id", default="-")

LOG_FORMAT = "%(asctime)s %(levelname)s [%(app_name)s/%(environment)s run=%(run_id)s] %(name)s: %(message)s"


# --- Filter adding run context to log records ---

class RunContextFilter(logging.Filter):
    """Adds application name, environment and the current run id to log records."""

    def __init__(self, app_name: str, environment: str):
        super().__init__()
        self.app_name = app_name
        self.environment = environment

    def filter(self, record: logging.LogRecord) -> bool:
        record.app_name = self.app_name
        record.environment = self.environment
        record.run_id = _run_id.get()
        return True


def set_run_id(run_id: str) -> None:
    """Tag subsequent log records with a run identifier (preset name, seed, ...)."""
    _run_id.set(run_id)


# --- Logging configuration function ---

def configure_logging(level: Optional[str] = None, log_to_file: Optional[bool] = None) -> None:
    """
    Configures the root logger using settings from app.config.Config.

    Safe to call more than once; previously installed park-sim handlers are replaced.
    """
    level_name = (level or Config.LOG_LEVEL).upper()
    min_level = getattr(logging, level_name, logging.INFO)
    to_file = Config.LOG_TO_FILE if log_to_file is None else log_to_file

    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_parksim", False):
            root.removeHandler(handler)
    root.setLevel(min_level)

    context = RunContextFilter(Config.APP_NAME, Config.ENV)
    formatter = logging.Formatter(LOG_FORMAT)

    # Console goes to stderr so CSV/JSON written to stdout stays clean
    if Config.LOG_TO_CONSOLE:
        console = logging.StreamHandler(sys.stderr)
        console.setFormatter(formatter)
        console.addFilter(context)
        console._parksim = True
        root.addHandler(console)

    if to_file:
        os.makedirs(os.path.dirname(os.path.abspath(Config.LOG_FILE_PATH)), exist_ok=True)
        rolling = RotatingFileHandler(
            Config.LOG_FILE_PATH,
            maxBytes=10 * 1024 * 1024,  # 10 MB
            backupCount=5,
        )
        rolling.setFormatter(formatter)
        rolling.addFilter(context)
        rolling._parksim = True
        root.addHandler(rolling)

    logging.getLogger(__name__).debug(
        f"Logging configured. Minimum level: {level_name}, console: {Config.LOG_TO_CONSOLE}, file: {to_file}"
    )
