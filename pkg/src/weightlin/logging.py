"""Logging configuration and console output utilities.

Reports go to :data:`console` (stdout) and diagnostics to :data:`error_console`
(stderr), so ``--format json`` output stays parseable with ``--verbose``.
"""

import logging
import time
from collections.abc import Iterator
from contextlib import contextmanager

from rich.console import Console
from rich.logging import RichHandler

from .constants import APP_NAME

# Console for reports (stdout)
console = Console()

# Console for diagnostics (stderr)
error_console = Console(stderr=True)

__all__ = ["console", "error_console", "setup_logging", "get_logger", "log_step"]


def setup_logging(verbose: bool = False) -> None:
    """Attach a rich handler to the package logger.

    Only ``weightlin.*`` loggers are raised to DEBUG with ``--verbose``; other
    libraries stay at WARNING.
    """
    handler = RichHandler(
        console=error_console,
        rich_tracebacks=True,
        show_time=verbose,
        show_path=verbose,
    )
    logging.basicConfig(level=logging.WARNING, format="%(message)s", datefmt="[%X]", handlers=[handler], force=True)
    logging.getLogger(APP_NAME).setLevel(logging.DEBUG if verbose else logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    if name != APP_NAME and not name.startswith(f"{APP_NAME}."):
        name = f"{APP_NAME}.{name}"
    return logging.getLogger(name)


@contextmanager
def log_step(logger: logging.Logger, step: str) -> Iterator[None]:
    """Log the wall time of a pipeline step at DEBUG level."""
    started = time.perf_counter()
    try:
        yield
    finally:
        logger.debug("%s took %.3fs", step, time.perf_counter() - started)
