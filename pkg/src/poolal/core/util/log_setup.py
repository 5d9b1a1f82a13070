"""Logging setup for the CLI."""

import logging

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = "poolal"


def configure_logging(
    level: str = "INFO",
    quiet: bool = False,
    console: Console | None = None,
) -> None:
    """Attach a RichHandler to the package logger.

    Library modules only call ``logging.getLogger(__name__)``; handlers are
    installed once here by the CLI. Repeated calls replace the handler.
    """
    logger = logging.getLogger(LOGGER_NAME)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = RichHandler(
        console=console or Console(stderr=True),
        show_path=False,
        rich_tracebacks=True,
    )
    handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
    logger.addHandler(handler)
    logger.setLevel(logging.WARNING if quiet else level.upper())
    logger.propagate = False
