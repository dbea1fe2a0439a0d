"""Eigenvalue-based solver for systems of polynomial equations."""

__version__ = "0.1.0"
