from dataclasses import replace

import numpy as np
import pytest

from bandflow.constants import CheckStatus
from bandflow.errors import DependencyError, IncompatibleTracesError, InsufficientDataError
from bandflow.flow import EvolveTrace, Grid, GridState, derivatives
from bandflow.verification import (
    check_comparison,
    check_convergence,
    check_convexity,
    check_gradient_bound,
    check_gradient_envelopes,
    check_interior_gradient,
    check_linfty_wedge,
    check_speed,
    check_theta_equation,
    slope_truncation,
)

TIMES = np.linspace(0.0, 8.0, 161)


@pytest.fixture(scope="module")
def wave_trace(constant_wave, grid128):
    return EvolveTrace.from_wave(constant_wave, grid128, TIMES)


@pytest.fixture(scope="module")
def slow_wave(constant_wave):
    """the same profile with a speed 20% too high"""
    return replace(constant_wave, c=1.2 * constant_wave.c)


def test_convergence_of_the_exact_wave(wave_trace, constant_wave):
    """ test that the exact wave has E = 0 on every rung """
    result = check_convergence(wave_trace, constant_wave)
    assert result.status == CheckStatus.PASS, result.note
    assert result.measured["ladder"] == pytest.approx([1.0, 2.0, 4.0])
    assert max(result.measured["E"]) < 1e-10
    assert result.measured["speed"] == pytest.approx(constant_wave.c, rel=1e-10)


def test_convergence_with_the_wrong_speed(wave_trace, slow_wave):
    """ test that a wrong reference speed fails """
    result = check_convergence(wave_trace, slow_wave)
    assert result.status == CheckStatus.FAIL
    assert "final E above tolerance" in result.note


def test_convergence_on_a_short_run(constant_wave, grid128):
    """ test that fewer than three rungs give a partial result """
    trace = EvolveTrace.from_wave(constant_wave, grid128, [0.0, 1.0, 2.0, 3.0])
    result = check_convergence(trace, constant_wave, s0=1.0, t_max=1.5)
    assert result.status == CheckStatus.PARTIAL


def test_wedge_of_a_lifted_wave(constant_wave, grid128):
    """ test C2 = k and c0 = c_bar for Phi(x) + c_bar t + k """
    trace = EvolveTrace.from_wave(constant_wave, grid128, TIMES, shift=0.7)
    result = check_linfty_wedge(trace, constant_wave)
    assert result.status == CheckStatus.PASS
    assert result.measured["C2"] == pytest.approx(0.7, abs=1e-6)
    assert result.measured["C1"] == pytest.approx(-0.7, abs=1e-6)
    assert result.measured["c0"] == pytest.approx(constant_wave.c, rel=1e-10)


def test_wedge_growth_above_cbar(wave_trace, constant_wave):
    """ test that growth faster than c_bar fails """
    fast = replace(constant_wave, c=0.8 * constant_wave.c)
    assert check_linfty_wedge(wave_trace, fast).status == CheckStatus.FAIL


def test_wedge_needs_snapshots(constant_wave, grid128):
    """ test that two snapshots are not enough """
    trace = EvolveTrace.from_wave(constant_wave, grid128, [0.0, 1.0])
    with pytest.raises(InsufficientDataError):
        check_linfty_wedge(trace, constant_wave)


def test_convexity(wave_trace, grid128):
    """ test convexity of the wave and the claim restricted to rho data """
    assert check_convexity(wave_trace).status == CheckStatus.PASS
    trace = EvolveTrace(grid128, meta={"datum": "user-function"})
    trace.add_snapshot(GridState(grid128, grid128.x**2))
    assert check_convexity(trace).status == CheckStatus.NOT_APPLICABLE


def test_convexity_fails_on_a_concave_state(grid128):
    """ test a concave snapshot """
    trace = EvolveTrace(grid128, meta={"datum": "rho"})
    trace.add_snapshot(GridState(grid128, -(grid128.x**2)))
    assert check_convexity(trace).status == CheckStatus.FAIL


def test_speed(wave_trace, constant_wave, slow_wave):
    """ test the fitted centerline speed """
    assert check_speed(wave_trace, constant_wave).status == CheckStatus.PASS
    assert check_speed(wave_trace, slow_wave).status == CheckStatus.FAIL


def test_gradient_bound(wave_trace):
    """ test the finite slope bound """
    result = check_gradient_bound(wave_trace)
    assert result.status == CheckStatus.PASS
    assert np.isfinite(result.measured["C3"])


def test_theta_equation_of_the_wave(wave_trace, constant_pair):
    """ test that the angle of a translating profile is stationary """
    result = check_theta_equation(wave_trace, constant_pair)
    assert result.status == CheckStatus.PASS
    assert result.measured["boundary_theta_gap"] <= result.measured["boundary_residual"] + 1e-12


def test_comparison(constant_wave, grid128):
    """ test strict ordering of a wave and its lift """
    low = EvolveTrace.from_wave(constant_wave, grid128, TIMES)
    high = EvolveTrace.from_wave(constant_wave, grid128, TIMES, shift=1.0)
    result = check_comparison(low, high)
    assert result.status == CheckStatus.PASS
    assert result.measured["min_gap"] == pytest.approx(1.0)
    assert check_comparison(high, low).status == CheckStatus.PASS


def test_comparison_of_crossing_data(grid128):
    """ test that crossing data do not meet the hypothesis """
    a = EvolveTrace(grid128)
    b = EvolveTrace(grid128)
    a.add_snapshot(GridState(grid128, grid128.x))
    b.add_snapshot(GridState(grid128, -grid128.x))
    result = check_comparison(a, b)
    assert result.status == CheckStatus.NOT_APPLICABLE
    assert result.note == "hypothesis not met at t=0"


def test_comparison_of_incompatible_traces(constant_wave, grid128):
    """ test traces with different snapshot times """
    a = EvolveTrace.from_wave(constant_wave, grid128, [0.0, 1.0])
    b = EvolveTrace.from_wave(constant_wave, grid128, [0.0, 1.5], shift=1.0)
    with pytest.raises(IncompatibleTracesError):
        check_comparison(a, b)


def test_gradient_envelopes_claims(wave_trace, grid128, constant_wave):
    """ test that envelopes are claimed for rho data and need both waves """
    assert check_gradient_envelopes(wave_trace, constant_wave, constant_wave).status == CheckStatus.NOT_APPLICABLE
    trace = EvolveTrace.from_wave(constant_wave, grid128, [0.0, 1.0])
    trace.meta["datum"] = "rho"
    with pytest.raises(DependencyError):
        check_gradient_envelopes(trace, constant_wave, None)


def test_interior_gradient_of_the_wave(wave_trace, constant_wave):
    """ test the interior bound on a wave with T = 0 """
    result = check_interior_gradient(wave_trace, constant_wave, 0.0)
    assert result.status == CheckStatus.PASS, result.note
    assert result.measured["T_eps"] == 0.0
    assert result.measured["M3"] <= result.measured["M3_bound"]
    with pytest.raises(DependencyError):
        check_interior_gradient(wave_trace, constant_wave, None)


def test_interior_gradient_reports_its_slack(wave_trace, constant_wave):
    """ test that the discretization slack is the tolerance of the interior bound """
    result = check_interior_gradient(wave_trace, constant_wave, 0.0, disc_slack=1e-3)
    assert result.status == CheckStatus.PASS
    assert result.tolerance == 1e-3
    assert result.measured["disc_slack"] == 1e-3


def test_slope_truncation_bounds_the_slope_error(constant_wave):
    """ test that the Richardson estimate covers the slope error of the wave on the finer grid """
    times = [0.0, 0.5, 1.0]
    fine = EvolveTrace.from_wave(constant_wave, Grid.uniform(128), times)
    coarse = EvolveTrace.from_wave(constant_wave, Grid.uniform(64), times)
    estimate = slope_truncation(fine, coarse, half_width=0.8)
    x = fine.grid.x
    inner = np.abs(x) <= 0.8
    ux, _ = derivatives(fine.states[0].u, x)
    _, exact = constant_wave.evaluate(x[inner])
    assert 0 < np.max(np.abs(ux[inner] - exact)) <= estimate
    assert slope_truncation(fine, coarse, half_width=0.5) <= estimate


def test_slope_truncation_needs_nested_traces(constant_wave):
    """ test that grids which are not nested and unequal snapshot times are rejected """
    fine = EvolveTrace.from_wave(constant_wave, Grid.uniform(128), [0.0, 1.0])
    with pytest.raises(IncompatibleTracesError):
        slope_truncation(fine, EvolveTrace.from_wave(constant_wave, Grid.clustered(64), [0.0, 1.0]))
    with pytest.raises(IncompatibleTracesError):
        slope_truncation(fine, EvolveTrace.from_wave(constant_wave, Grid.uniform(64), [0.0, 2.0]))


def test_result_serialization(wave_trace, constant_wave):
    """ test the result dictionary """
    data = check_speed(wave_trace, constant_wave).to_dict()
    assert data["name"] == "speed"
    assert data["status"] == "pass"
    assert set(data) == {"name", "status", "measured", "tolerance", "window", "note"}
