"""Utility modules for Eigensolver."""
from .logger import get_logger, setup_logger, timed

__all__ = ["get_logger", "setup_logger", "timed"]
