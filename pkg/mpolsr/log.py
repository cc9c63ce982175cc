"""
Logging helpers for the mpolsr package.

Library modules only ask for a logger; handlers are installed by the CLI.
The console format keeps the "[LEVEL] message" prefixes used throughout
the project's terminal output.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

import logging

ROOT_LOGGER = "mpolsr"
CONSOLE_FORMAT = "[%(levelname)s] %(message)s"


def get_logger(name: str) -> logging.Logger:
    """
    Return a logger inside the package tree.

    Args:
        name: Usually the caller's __name__.
    """
    if not name.startswith(ROOT_LOGGER):
        name = f"{ROOT_LOGGER}.{name}"
    return logging.getLogger(name)


def configure_logging(verbose: bool = False) -> None:
    """
    Install a console handler on the package logger.

    Args:
        verbose: DEBUG level when True, INFO otherwise.
    """
    logger = logging.getLogger(ROOT_LOGGER)
    if not any(getattr(h, "_mpolsr_console", False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
        handler._mpolsr_console = True
        logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    logger.propagate = False
