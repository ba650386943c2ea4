import numpy as np
import pytest

from miso_pareto.services.channel import (
    derive_constants,
    preset_constants,
    random_rayleigh,
    synth_from_constants,
)


@pytest.fixture
def fig2():
    return preset_constants("fig2")


@pytest.fixture
def fig3():
    return preset_constants("fig3")


@pytest.fixture
def fig4():
    return preset_constants("fig4")


@pytest.fixture(params=["fig2", "fig3", "fig4"])
def preset(request):
    return preset_constants(request.param)


@pytest.fixture
def fig2_channels(fig2):
    return synth_from_constants(fig2)


def rayleigh_draws(count, n_t=4, first_seed=0):
    """Channel realizations and their constants for consecutive seeds."""
    draws = []
    for seed in range(first_seed, first_seed + count):
        ch = random_rayleigh(n_t, seed)
        draws.append((ch, derive_constants(ch)))
    return draws


def assert_single_peak(values, rtol=1e-9):
    """Non-decreasing up to the maximum, non-increasing after it."""
    values = np.asarray(values, dtype=float)
    tol = rtol * max(1.0, np.max(np.abs(values)))
    peak = int(np.argmax(values))
    assert np.all(np.diff(values[:peak + 1]) >= -tol)
    assert np.all(np.diff(values[peak:]) <= tol)
