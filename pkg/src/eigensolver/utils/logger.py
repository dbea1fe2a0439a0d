"""Loguru setup for the solver, the CLI and the API."""
import logging
import sys
import time
from contextlib import contextmanager
from typing import Dict, Iterator

from loguru import logger

# solver phases tag their messages through ``timed``
LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<magenta>{extra[phase]: <8}</magenta> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)


class InterceptHandler(logging.Handler):
    """Forward standard-library records (uvicorn, fastapi, py.warnings) to loguru."""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        frame, depth = logging.currentframe(), 2
        while frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def setup_logger(level: str = "INFO") -> None:
    """
    Configure loguru with the solver's format.

    numpy/scipy warnings such as ``LinAlgWarning`` from an ill-conditioned
    triangular solve arrive through ``py.warnings``.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
    """
    logger.remove()
    logger.configure(extra={"phase": "-"})
    logger.add(sys.stderr, format=LOG_FORMAT, level=level, colorize=True)

    logging.basicConfig(handlers=[InterceptHandler()], level=0, force=True)
    logging.captureWarnings(True)
    for name in ["uvicorn", "uvicorn.error", "uvicorn.access", "fastapi", "py.warnings"]:
        logging.getLogger(name).handlers = [InterceptHandler()]


def get_logger():
    """Get the configured logger instance."""
    return logger


@contextmanager
def timed(timings: Dict[str, float], phase: str) -> Iterator[None]:
    """Accumulate the wall-clock seconds of a block into ``timings[phase]``; messages inside carry the phase."""
    start = time.perf_counter()
    try:
        with logger.contextualize(phase=phase):
            yield
    finally:
        elapsed = time.perf_counter() - start
        timings[phase] = timings.get(phase, 0.0) + elapsed
        logger.debug(f"⏱️  {phase}: {elapsed:.3f}s")
