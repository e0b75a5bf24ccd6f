# app/core/logging_config.py
import logging
import os
import sys
from logging.handlers import RotatingFileHandler

LOGGER_NAME = "bbs"
LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
# matplotlib's font manager floods DEBUG output during plotting
NOISY_LIBRARIES = ("matplotlib", "PIL")


def setup_logging():
    log_level = os.getenv("LOG_LEVEL", "INFO").upper()
    if log_level not in LEVELS:
        log_level = "DEBUG"

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(getattr(logging, log_level))

    # Every module calls setup_logging(); attach handlers only once
    if logger.handlers:
        return logger

    formatter = logging.Formatter(
        fmt="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    console = logging.StreamHandler(sys.stdout)
    console.setLevel(getattr(logging, log_level))
    console.setFormatter(formatter)
    logger.addHandler(console)

    # LOG_FILE="" turns the rotating file off
    log_file = os.getenv("LOG_FILE", "bbs.log")
    if log_file:
        rotating = RotatingFileHandler(log_file, maxBytes=10 * 1024 * 1024, backupCount=5)
        rotating.setLevel(logging.INFO)
        rotating.setFormatter(formatter)
        logger.addHandler(rotating)

    for name in NOISY_LIBRARIES:
        logging.getLogger(name).setLevel(logging.WARNING)

    logger.propagate = False
    return logger
