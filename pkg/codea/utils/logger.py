"""
Centralized logging configuration for the optimizer and experiment harness.
"""
import logging
import sys
from pathlib import Path
from typing import List, Optional, TextIO, Union

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def setup_logging(level: str = "INFO", log_file: Optional[Union[str, Path]] = None,
                  format_string: Optional[str] = None, stream: Optional[TextIO] = None) -> None:
    """
    Configure the root logger for the application.

    Records go to stream (stdout unless given) and, when log_file is given,
    are also appended to that file. Calling this again replaces the previous
    handlers. Experiment workers inherit the configuration when forked.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional path of a run log, e.g. <output_dir>/experiment.log
        format_string: Custom format string for log messages
        stream: Console stream; pass sys.stderr when stdout carries data
    """
    numeric_level = getattr(logging, str(level).upper(), logging.INFO)

    handlers: List[logging.Handler] = [logging.StreamHandler(stream or sys.stdout)]
    if log_file is not None:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_path, encoding="utf-8"))

    logging.basicConfig(
        level=numeric_level,
        format=format_string or LOG_FORMAT,
        datefmt=DATE_FORMAT,
        handlers=handlers,
        force=True,
    )

    app_logger = logging.getLogger("codea")
    app_logger.setLevel(numeric_level)

    app_logger.debug(f"Logging configured at level: {level}"
                     + (f", mirrored to {log_file}" if log_file is not None else ""))


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance with the given name.

    Args:
        name: Logger name, typically __name__ or class name

    Returns:
        logging.Logger: Configured logger instance
    """
    return logging.getLogger(name)
