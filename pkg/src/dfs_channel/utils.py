import logging
import sys

VERSION = "0.1.0"

DEFAULT_LOG_LEVEL = "info"
LOG_FORMAT = "{asctime} [{levelname:^8}] {message}"

LOG_LEVELS = {
    "critical": logging.CRITICAL,
    "debug": logging.DEBUG,
    "error": logging.ERROR,
    "info": logging.INFO,
    "warn": logging.WARN,
    "warning": logging.WARNING,
}

_logger = logging.getLogger(__name__)


def configure_logging(level_name: str, log_file: str | None = None) -> None:
    """Configure the logging. Records go to stderr because stdout carries the
    exported data"""
    level = LOG_LEVELS.get(level_name.lower(), logging.DEBUG)

    log = logging.getLogger()
    log.setLevel(level)

    formatter = logging.Formatter(LOG_FORMAT, style="{")

    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setLevel(logging.DEBUG)
    stream_handler.setFormatter(formatter)
    log.addHandler(stream_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        log.addHandler(file_handler)


def convert_size(x: str | int) -> int:
    """Parse a count with an optional decimal suffix like 5K or 1.5M"""
    x = str(x).strip().upper()
    for c, m in {"K": 10**3, "M": 10**6, "G": 10**9}.items():
        if x.endswith(c):
            return int(m * float(x[:-1]))
    return int(float(x))


def positive_int(x: str) -> int:
    value = int(x)
    if value < 1:
        raise ValueError(f"{x} is not a positive integer")
    return value


def non_negative_int(x: str) -> int:
    value = int(x)
    if value < 0:
        raise ValueError(f"{x} is negative")
    return value


def format_spin(two_j: int) -> str:
    """Render a doubled spin label as j, e.g. 3 -> 3/2 and 4 -> 2"""
    if two_j % 2:
        return f"{two_j}/2"
    return str(two_j // 2)
