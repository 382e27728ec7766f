"""Backend parity: the numba kernels must match the pure-NumPy path."""

import os
import subprocess
import sys

import numpy as np
import pytest

from turning_frame import _kernels as K


@pytest.fixture(scope="module")
def sample_momenta():
    rng = np.random.default_rng(5)
    p = np.sort(rng.uniform(-3.0, 6.0, 512))
    return p[np.abs(p) > 1e-3]


@pytest.fixture(scope="module")
def sample_amps(sample_momenta):
    rng = np.random.default_rng(6)
    n = sample_momenta.shape[0]
    amps = rng.normal(size=n) + 1j * rng.normal(size=n)
    return amps / np.linalg.norm(amps)


numba_only = pytest.mark.skipif(
    not K.HAVE_NUMBA, reason="numba backend not active"
)


@numba_only
@pytest.mark.parametrize("tau", [-1.0, 0.0, 0.3, 0.9, 2.5, 17.0])
def test_phase_profile_parity(sample_momenta, tau):
    a = K._phase_profile_nb(sample_momenta, tau, 4.0)
    b = K._phase_profile_np(sample_momenta, tau, 4.0)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-14)


@numba_only
@pytest.mark.parametrize("tau", [-1.0, 0.0, 0.3, 0.9, 2.5, 17.0])
def test_displacement_profile_parity(sample_momenta, tau):
    a = K._displacement_profile_nb(sample_momenta, tau, 4.0)
    b = K._displacement_profile_np(sample_momenta, tau, 4.0)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-14)


@numba_only
def test_classical_profile_parity():
    taus = np.linspace(-1.0, 3.0, 801)
    a = K._classical_position_profile_nb(taus, 4.0, 1.25, 4.0)
    b = K._classical_position_profile_np(taus, 4.0, 1.25, 4.0)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-14)


@numba_only
def test_apply_phase_parity(sample_momenta, sample_amps):
    phase = K._phase_profile_np(sample_momenta, 0.7, 4.0)
    a = K._apply_phase_nb(sample_amps, phase, 1.0)
    b = K._apply_phase_np(sample_amps, phase, 1.0)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-15)


@numba_only
def test_derivative_parity(sample_amps):
    a = K._derivative_nb(sample_amps, 0.01)
    b = K._derivative_np(sample_amps, 0.01)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-13)


@numba_only
def test_position_transform_parity(sample_momenta, sample_amps):
    q = np.linspace(-2.0, 6.0, 301)
    a = K._position_transform_nb(sample_momenta, sample_amps, q, 1.0)
    b = K._position_transform_np(sample_momenta, sample_amps, q, 1.0)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-10)


def test_snap_produces_exact_boundary_values():
    """Values at fl(p^2/lam) land on the joint closed form exactly."""
    for p, lam in ((0.37, 2.9), (1.25, 4.0), (9.7, 0.13)):
        edge = p * p / lam
        d = K.displacement_profile(np.array([p]), edge, lam)[0]
        assert d == pytest.approx(2.0 * p * p / lam, abs=1e-12)


def test_derivative_is_fourth_order():
    """Exact for quartics, converging at h^4 on a transcendental."""
    x = np.linspace(0.0, 1.0, 21)
    h = x[1] - x[0]
    poly = (x**4 - 2.0 * x**2 + 3.0 * x).astype(complex)
    expected = 4.0 * x**3 - 4.0 * x + 3.0
    np.testing.assert_allclose(K.derivative(poly, h), expected, atol=1e-11)

    errs = []
    for n in (41, 81):
        x = np.linspace(0.0, 1.0, n)
        h = x[1] - x[0]
        err = np.max(np.abs(K.derivative(np.exp(3j * x), h) - 3j * np.exp(3j * x)))
        errs.append(err)
    assert errs[0] / errs[1] > 12.0  # ~16 for a clean fourth order


def test_env_flag_forces_numpy_backend():
    env = dict(os.environ, TURNING_FRAME_NO_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c",
         "import turning_frame; print(turning_frame.backend())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_backend_name_is_consistent():
    assert K.backend() == ("numba" if K.HAVE_NUMBA else "numpy")
    assert K.phase_profile is (
        K._phase_profile_nb if K.HAVE_NUMBA else K._phase_profile_np
    )
