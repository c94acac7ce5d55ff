"""Shared test setup: allow up to 8 numba workers before the pool is created."""

import os

os.environ.setdefault("NUMBA_NUM_THREADS", "8")
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

import numpy as np
import pytest

import wildfire._accel as accel


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(params=["numpy", "numba"])
def backend(request):
    """Run a test under both kernel backends."""
    previous = accel.get_backend()
    try:
        accel.set_backend(request.param)
    except RuntimeError:
        pytest.skip("numba backend unavailable")
    yield request.param
    accel.set_backend(previous)
