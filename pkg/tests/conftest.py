"""Shared fixtures."""
import numpy as np
import pytest

from eigensolver.config import Settings
from eigensolver.core.macaulay import CokernelBasis
from eigensolver.services.examples import running_example
from eigensolver.services.solver import SolveOptions


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def running():
    return running_example()


@pytest.fixture
def running_cokernel(running):
    """Cokernel with the exact rows displayed for the running example."""
    return CokernelBasis(running.extras["cokernel"], running.tuple.D)


@pytest.fixture
def options():
    return SolveOptions(seed=7)


@pytest.fixture
def settings():
    return Settings(seed=11, log_level="WARNING")
