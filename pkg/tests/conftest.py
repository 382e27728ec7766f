"""Shared fixtures: the reference Gaussian configuration on two grids."""

import numpy as np
import pytest

from turning_frame import (
    FrameModel,
    GaussianMode,
    GaussianSpec,
    MomentumGrid,
    make_gaussian,
)

# Reference configuration used across the suite: Gaussian centered at
# q0=4 with p0=1.25, sigma=1 under slope lambda=4, hbar=1.  The total
# displacement shift for this state evaluates to -1.6875.
REF_Q0 = 4.0
REF_P0 = 1.25
REF_SIGMA = 1.0
REF_LAMBDA = 4.0


@pytest.fixture(scope="session")
def model():
    return FrameModel(lam=REF_LAMBDA)


@pytest.fixture(scope="session")
def ref_spec():
    return GaussianSpec(q0=REF_Q0, p0=REF_P0, sigma=REF_SIGMA)


@pytest.fixture(scope="session")
def trunc_grid():
    """Positive-support grid pinned by the shift regression."""
    return MomentumGrid(0.01, 5.0, 4096)


@pytest.fixture(scope="session")
def trunc_state(ref_spec, trunc_grid, model):
    return make_gaussian(ref_spec, trunc_grid, model,
                         mode=GaussianMode.TRUNCATE_POSITIVE)


@pytest.fixture(scope="session")
def wide_grid():
    """Grid wide enough that the Gaussian decays below 1e-12 at both edges."""
    return MomentumGrid(-2.5, 5.5, 8192)


@pytest.fixture(scope="session")
def wide_state(ref_spec, wide_grid, model):
    return make_gaussian(ref_spec, wide_grid, model, mode=GaussianMode.RAW)


def riemann(values, h):
    """Plain node-sum quadrature used as the test-side integration rule."""
    return float(np.sum(values) * h)
