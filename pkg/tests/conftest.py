import numpy as np
import pytest

from airsel import (
    AggregationWeights,
    ChannelMatrix,
    NoiseModel,
    ProblemInstance,
    SystemDims,
    make_rng,
)


def random_instance(n, k, l_budget, seed, sigma2=1.0, power_limit=1.0):
    """Unit-scale random instance (iid complex Gaussian channel)."""
    rng = make_rng(seed)
    h = (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))) / np.sqrt(2)
    phi = rng.uniform(0.5, 1.5, size=k)
    phi /= phi.sum()
    return ProblemInstance(
        dims=SystemDims(n, k, l_budget),
        channel=ChannelMatrix(h),
        weights=AggregationWeights(phi),
        noise=NoiseModel(sigma2),
        power_limit=power_limit,
    )


def random_design(inst, seed, power_frac=0.9):
    """Random feasible (m, s, b) arrays for objective-level tests."""
    rng = make_rng(seed)
    n, k = inst.dims.n_antennas, inst.dims.n_devices
    m = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    s = rng.uniform(size=n)
    radius = np.sqrt(power_frac * inst.power_limit)
    b = radius * rng.uniform(size=k) * np.exp(2j * np.pi * rng.uniform(size=k))
    return m, s, b


@pytest.fixture
def small_instance():
    return random_instance(4, 2, 2, seed=1234)
