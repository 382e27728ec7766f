"""Tests for phase evolution, expectation routes, variance, and transforms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from turning_frame import (
    ClassicalState,
    ConsistencyError,
    DomainError,
    FrameModel,
    GaussianSpec,
    MomentumGrid,
    displacement_kernel,
    evolve,
    expectation_series,
    make_gaussian,
    moments,
    phase_branch,
    phase_theta,
    position_expectation_analytic,
    position_expectation_numeric,
    position_variance,
    q_of_tau,
    to_position_representation,
    total_phase,
)

from conftest import REF_LAMBDA, REF_P0, REF_Q0, REF_SIGMA, riemann

positive = st.floats(min_value=0.1, max_value=10.0, allow_nan=False)


def kernel_oracle(tau, p, lam):
    """Test-side displacement kernel written directly from the branch forms."""
    if tau <= 0.0:
        return tau
    if p * p >= lam * tau:
        return 2.0 * (p * p - p * math.sqrt(p * p - lam * tau)) / lam
    if 2.0 * p * p >= lam * tau:
        return 2.0 * (p * p - p * math.sqrt(lam * tau - p * p)) / lam
    return tau - 2.0 * p * p / lam


# -- scalar phase laws ------------------------------------------------------

def test_phase_theta_examples(model):
    assert phase_theta(0.0, 1.0, model) == 0.0
    assert phase_theta(0.390625, 1.25, model) == pytest.approx(
        (2.0 / 3.0) * 1.25**3 / 4.0, abs=1e-15
    )
    assert phase_theta(-2.0, 1.0, model) == pytest.approx(-2.0)


def test_phase_theta_rejects_forbidden_frame_value(model):
    with pytest.raises(DomainError):
        phase_theta(0.26, 1.0, model)
    with pytest.raises(DomainError):
        phase_theta(0.1, -1.0, model)


def test_total_phase_branch_joints(model):
    # tau = p^2/lambda: approaching and receding forms both give (2/3)p^3/lambda
    assert total_phase(0.25, 1.0, model) == pytest.approx(1.0 / 6.0, abs=1e-14)
    # tau = 2p^2/lambda: receding and free forms both give (4/3)p^3/lambda... /4
    assert total_phase(0.5, 1.0, model) == pytest.approx(1.0 / 3.0, abs=1e-14)
    assert total_phase(-2.0, 1.0, model) == pytest.approx(-2.0)


def test_phase_branch_ordering(model):
    assert phase_branch(-0.1, 1.0, model) == 1
    assert phase_branch(0.0, 1.0, model) == 1
    assert phase_branch(0.2, 1.0, model) == 2
    assert phase_branch(0.25, 1.0, model) == 2
    assert phase_branch(0.4, 1.0, model) == 3
    assert phase_branch(0.5, 1.0, model) == 3
    assert phase_branch(0.6, 1.0, model) == 4


@settings(max_examples=300, deadline=None)
@given(p=positive, lam=positive)
def test_phase_continuity_at_boundaries(p, lam):
    model = FrameModel(lam=lam)
    edge = p * p / lam
    third = (2.0 / 3.0) * p**3 / lam
    assert total_phase(0.0, p, model) == pytest.approx(0.0, abs=1e-10)
    assert total_phase(edge, p, model) == pytest.approx(third, abs=1e-10)
    assert total_phase(2.0 * edge, p, model) == pytest.approx(2.0 * third, abs=1e-10)
    # theta joins its linear branch at phi = 0 and caps at the turning point
    assert phase_theta(0.0, p, model) == 0.0
    assert phase_theta(edge, p, model) == pytest.approx(third, abs=1e-10)


@settings(max_examples=300, deadline=None)
@given(p=positive, lam=positive)
def test_kernel_continuity_and_plateau(p, lam):
    model = FrameModel(lam=lam)
    edge = p * p / lam
    cap = 2.0 * p * p / lam
    assert displacement_kernel(0.0, p, model) == pytest.approx(0.0, abs=1e-10)
    assert displacement_kernel(edge, p, model) == pytest.approx(cap, abs=1e-10)
    assert displacement_kernel(2.0 * edge, p, model) == pytest.approx(0.0, abs=1e-10)
    # the per-component displacement peaks at the turning scale
    taus = np.linspace(0.0, 2.0 * edge, 101)
    values = [displacement_kernel(float(t), p, model) for t in taus]
    assert max(values) <= cap + 1e-12
    assert np.argmax(values) == 50


def test_kernel_examples(model):
    assert displacement_kernel(0.25, 1.0, model) == pytest.approx(0.5, abs=1e-14)
    # symmetric slowdown on both sides of the turning scale
    v1 = displacement_kernel(0.125, 1.0, model)
    v2 = displacement_kernel(0.375, 1.0, model)
    expected = 2.0 * (1.0 - math.sqrt(0.5)) / 4.0
    assert v1 == pytest.approx(expected, abs=1e-14)
    assert v2 == pytest.approx(expected, abs=1e-14)
    assert displacement_kernel(0.5, 1.0, model) == pytest.approx(0.0, abs=1e-14)
    assert displacement_kernel(-3.0, 1.0, model) == -3.0


def test_kernel_matches_test_side_oracle(model):
    rng = np.random.default_rng(11)
    for _ in range(200):
        p = rng.uniform(0.1, 10.0)
        tau = rng.uniform(-1.0, 3.0) * p * p / model.lam
        assert displacement_kernel(tau, p, model) == pytest.approx(
            kernel_oracle(tau, p, model.lam), rel=1e-12, abs=1e-12
        )


# -- evolution --------------------------------------------------------------

def test_evolve_identity_at_same_tau(trunc_state, model):
    out = evolve(trunc_state, trunc_state.tau, model)
    np.testing.assert_array_equal(out.amps, trunc_state.amps)


def test_evolve_is_pointwise_phase(trunc_state, model):
    for tau in (-1.0, 0.3, 0.75, 2.0, 16.0):
        out = evolve(trunc_state, tau, model)
        np.testing.assert_allclose(
            np.abs(out.amps), np.abs(trunc_state.amps), rtol=1e-15, atol=0.0
        )
        assert abs(out.norm() - 1.0) < 1e-9


def test_evolve_composes_through_intermediate_scales(trunc_state, model):
    direct = evolve(trunc_state, 2.0, model)
    stepped = evolve(evolve(trunc_state, 0.7, model), 2.0, model)
    np.testing.assert_allclose(stepped.amps, direct.amps, rtol=0, atol=1e-12)


def test_evolved_expectation_reference_value(trunc_state, model):
    """Late-scale expectation approaches q0 + tau - 2<p^2>/lambda."""
    evolved = evolve(trunc_state, 2.0, model)
    value = position_expectation_numeric(evolved, model)
    assert value == pytest.approx(4.0 + 2.0 - 2.0 * 1.8125 / 4.0, rel=0.02)


# -- expectation routes -----------------------------------------------------

def test_numeric_expectation_at_anchor(trunc_state, model):
    assert position_expectation_numeric(trunc_state, model) == pytest.approx(
        REF_Q0, abs=1e-6
    )


def test_numeric_expectation_pre_turning_translation(trunc_state, model):
    evolved = evolve(trunc_state, -1.0, model)
    assert position_expectation_numeric(evolved, model) == pytest.approx(
        3.0, abs=1e-6
    )


def test_routes_agree_across_the_turning_region(trunc_state, model):
    for tau in np.linspace(-1.0, 3.0, 17):
        numeric = position_expectation_numeric(evolve(trunc_state, tau, model), model)
        analytic = position_expectation_analytic(trunc_state, tau, model)
        assert numeric == pytest.approx(analytic, abs=1e-5)


def test_analytic_expectation_is_exact_before_potential(trunc_state, model):
    anchor = position_expectation_analytic(trunc_state, 0.0, model)
    for tau in (-2.0, -0.5):
        assert position_expectation_analytic(trunc_state, tau, model) == pytest.approx(
            anchor + tau, abs=1e-12
        )


def test_analytic_expectation_reaches_asymptotic_line(trunc_state, model):
    stats = moments(trunc_state)
    bound = 2.0 * trunc_state.grid.p_max**2 / REF_LAMBDA
    anchor = position_expectation_analytic(trunc_state, 0.0, model)
    for tau in (bound, bound + 1.7):
        expected = anchor + tau - 2.0 * stats.mean_p2 / REF_LAMBDA
        assert position_expectation_analytic(
            trunc_state, tau, model
        ) == pytest.approx(expected, abs=1e-10)


def test_turning_region_expectation_against_quadrature_oracle(wide_state, model):
    """Mid-region value from an independent test-side quadrature."""
    p = wide_state.grid.nodes
    dens = np.abs(wide_state.amps) ** 2
    oracle = REF_Q0 + riemann(
        dens * np.array([kernel_oracle(0.3, pi, REF_LAMBDA) for pi in p]),
        wide_state.grid.h,
    )
    got = position_expectation_analytic(wide_state, 0.3, model)
    assert got == pytest.approx(oracle, abs=1e-9)
    # strictly below the classical trajectory at the mean momentum, above q0
    classical = q_of_tau(0.3, ClassicalState(q0=REF_Q0, p=REF_P0), model)
    assert REF_Q0 < got < classical
    assert got == pytest.approx(4.3008, abs=2e-3)


def test_analytic_route_requires_pre_turning_reference(trunc_state, model):
    evolved = evolve(trunc_state, 1.0, model)
    with pytest.raises(DomainError):
        position_expectation_analytic(evolved, 2.0, model)


def test_routes_consistent_from_negative_reference(ref_spec, trunc_grid, model):
    state = make_gaussian(ref_spec, trunc_grid, model, tau0=-0.5)
    assert state.tau == -0.5
    got = position_expectation_analytic(state, 0.3, model)
    base = make_gaussian(ref_spec, trunc_grid, model)
    assert got == pytest.approx(
        position_expectation_analytic(base, 0.3, model), abs=1e-9
    )


def test_fd_convergence_is_at_least_second_order(ref_spec, model):
    """Halving h shrinks the route discrepancy by >= 4 (observed order >= 2)."""
    errs = []
    for n in (2048, 4095):
        grid = MomentumGrid(0.01, 5.0, n)
        state = make_gaussian(ref_spec, grid, model)
        worst = 0.0
        for tau in np.linspace(-1.0, 3.0, 9):
            numeric = position_expectation_numeric(evolve(state, tau, model), model)
            analytic = position_expectation_analytic(state, tau, model)
            worst = max(worst, abs(numeric - analytic))
        errs.append(worst)
    assert errs[0] / errs[1] >= 4.0


# -- variance ---------------------------------------------------------------

def test_variance_starts_at_sigma_squared(wide_state, model):
    assert position_variance(wide_state, model) == pytest.approx(1.0, abs=1e-4)


def test_variance_asymptote_matches_fourth_moment_oracle(wide_state, model):
    # sigma^2 + Var(2 p^2/lambda) with Gaussian fourth moments:
    # Var(p^2) = 4 p0^2 dp^2 + 2 dp^4
    dp2 = (1.0 / (2.0 * REF_SIGMA)) ** 2
    var_p2 = 4.0 * REF_P0**2 * dp2 + 2.0 * dp2**2
    expected = REF_SIGMA**2 + 4.0 * var_p2 / REF_LAMBDA**2
    assert expected == pytest.approx(1.421875)
    got = position_variance(evolve(wide_state, 16.0, model), model)
    assert got == pytest.approx(expected, rel=0.02)


def test_variance_grows_through_turning_region(wide_state, model):
    """The spread rises above its initial value near the turning scale and
    keeps growing toward the asymptote (dispersion accumulates; the
    turning-scale value stays below sigma^2 + tau*^2 because the
    displacement kernel is bounded by 2*tau there)."""
    tau_star = REF_P0**2 / REF_LAMBDA
    v0 = position_variance(wide_state, model)
    v_star = position_variance(evolve(wide_state, tau_star, model), model)
    v_late = position_variance(evolve(wide_state, 16.0, model), model)
    assert v_star > v0
    assert v_star < v_late
    assert v_star < REF_SIGMA**2 + tau_star**2 + 1e-2


def test_variance_decomposition(wide_state, model):
    """Variance = (width term) + Var_density(D) at any scale."""
    tau = 0.8
    p = wide_state.grid.nodes
    h = wide_state.grid.h
    dens = np.abs(wide_state.amps) ** 2
    d_vals = np.array([kernel_oracle(tau, pi, REF_LAMBDA) for pi in p])
    mean_d = riemann(dens * d_vals, h)
    var_d = riemann(dens * (d_vals - mean_d) ** 2, h)
    got = position_variance(evolve(wide_state, tau, model), model)
    assert got == pytest.approx(REF_SIGMA**2 + var_d, abs=5e-3)


# -- position representation ------------------------------------------------

@pytest.fixture(scope="module")
def q_window():
    return np.linspace(-2.0, 12.0, 1401)


def test_position_profile_is_initial_gaussian(wide_state, model, q_window):
    profile = to_position_representation(wide_state, q_window, model)
    assert profile.coverage_ok
    assert profile.norm == pytest.approx(1.0, abs=1e-3)
    rho = np.abs(profile.amps) ** 2
    dq = q_window[1] - q_window[0]
    center = riemann(rho * q_window, dq) / profile.norm
    spread = riemann(rho * (q_window - center) ** 2, dq) / profile.norm
    assert center == pytest.approx(REF_Q0, abs=1e-6)
    assert spread == pytest.approx(REF_SIGMA**2, rel=0.01)


def test_position_profile_translates_rigidly_before_potential(
    wide_state, model, q_window
):
    profile = to_position_representation(evolve(wide_state, -1.0, model), model=model,
                                         q_grid=q_window)
    rho = np.abs(profile.amps) ** 2
    dq = q_window[1] - q_window[0]
    center = riemann(rho * q_window, dq) / profile.norm
    assert center == pytest.approx(REF_Q0 - 1.0, abs=1e-5)


def test_position_profile_skews_in_turning_window(wide_state, model, q_window):
    profile = to_position_representation(evolve(wide_state, 0.75, model), q_window,
                                         model)
    rho = np.abs(profile.amps) ** 2
    dq = q_window[1] - q_window[0]
    m0 = riemann(rho, dq)
    m1 = riemann(rho * q_window, dq) / m0
    m2 = riemann(rho * (q_window - m1) ** 2, dq) / m0
    m3 = riemann(rho * (q_window - m1) ** 3, dq) / m0
    assert abs(m3 / m2**1.5) > 0.05


def test_position_profile_flags_poor_coverage(wide_state, model):
    narrow = np.linspace(3.0, 5.0, 301)
    profile = to_position_representation(wide_state, narrow, model)
    assert not profile.coverage_ok


def test_position_profile_rejects_nonuniform_grid(wide_state, model):
    with pytest.raises(DomainError):
        to_position_representation(wide_state, np.array([0.0, 1.0, 3.0]), model)


# -- expectation series -----------------------------------------------------

def test_series_pre_turning_translation(trunc_state, model):
    series = expectation_series(trunc_state, np.array([-1.0, 0.0]), model)
    anchor = series.q_mean[1]
    np.testing.assert_allclose(series.q_mean, [anchor - 1.0, anchor], atol=1e-12)
    np.testing.assert_allclose(series.norm, 1.0, atol=1e-9)


def test_series_late_slope_is_unity(trunc_state, model):
    taus = np.linspace(13.0, 16.0, 16)
    series = expectation_series(trunc_state, taus, model)
    slope = np.polyfit(series.taus, series.q_mean, 1)[0]
    assert slope == pytest.approx(1.0, abs=1e-3)


def test_series_carries_classical_overlay_and_variance(trunc_state, model):
    classical = ClassicalState(q0=REF_Q0, p=REF_P0)
    taus = np.linspace(-0.5, 1.0, 7)
    series = expectation_series(
        trunc_state, taus, model, with_variance=True, classical=classical
    )
    assert series.q_var is not None and np.all(series.q_var > 0.0)
    np.testing.assert_allclose(
        series.q_classical, q_of_tau(taus, classical, model), rtol=0, atol=0
    )


def test_series_rejects_unordered_taus(trunc_state, model):
    with pytest.raises(DomainError):
        expectation_series(trunc_state, np.array([0.0, 0.0, 1.0]), model)


def test_series_cross_check_flags_inconsistent_routes(trunc_state, model):
    """A coarse grid degrades the numeric route enough to trip the guard."""
    grid = MomentumGrid(0.01, 5.0, 96)
    state = make_gaussian(
        GaussianSpec(q0=REF_Q0, p0=REF_P0, sigma=REF_SIGMA), grid,
        FrameModel(lam=REF_LAMBDA)
    )
    with pytest.raises(ConsistencyError):
        expectation_series(state, np.array([0.2, 0.5, 0.9]), model)
