"""Shared fixtures.

The discrete operators are expensive enough to build (dense eigensystem
at N = 96) that the suite shares one instance per resolution.
"""

import numpy as np
import pytest

from quadwave import evolution


@pytest.fixture(scope="session")
def op64():
    return evolution.DiscreteOperator(evolution.make_grid(64))


@pytest.fixture(scope="session")
def op96():
    return evolution.DiscreteOperator(evolution.make_grid(96))


@pytest.fixture(scope="session")
def grid64(op64):
    return op64.grid


@pytest.fixture(scope="session")
def grid96(op96):
    return op96.grid


@pytest.fixture()
def rng():
    return np.random.default_rng(20260816)
