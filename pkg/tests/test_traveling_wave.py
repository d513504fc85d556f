import math

import numpy as np
import pytest

from bandflow.coefficients import ConstantPair
from bandflow.errors import HypothesisViolationError, QuadratureAccuracyError
from bandflow.waves import (
    reconstruct_profile,
    shoot_profile,
    solve_c_of_h,
    solve_cbar,
    span,
    span_h,
    stationary_profile,
)


def test_grim_reaper_speed_and_profile(grim_reaper_pair):
    """ test c_bar = pi/2 and Phi(x) = -(2/pi) ln cos(pi x / 2) """
    wave = solve_cbar(grim_reaper_pair)
    assert wave.c == pytest.approx(np.pi / 2, abs=1e-10)
    assert math.isinf(wave.height)
    assert wave.x_plus == pytest.approx(1.0, abs=1e-10)
    x = np.linspace(-0.9, 0.9, 37)
    phi, psi = wave.evaluate(x)
    np.testing.assert_allclose(phi, -(2 / np.pi) * np.log(np.cos(np.pi * x / 2)), atol=1e-8)
    np.testing.assert_allclose(psi, np.tan(np.pi * x / 2), rtol=1e-6, atol=1e-8)


def test_grim_reaper_finite_slope(grim_reaper_pair):
    """ test c(h) = arctan(h) when a = 1 and b = 0 """
    for h in (0.5, 3.0, 40.0):
        wave = solve_c_of_h(grim_reaper_pair, h)
        assert wave.c == pytest.approx(math.atan(h), abs=1e-10)
        assert wave.profile.x_range == pytest.approx((-1.0, 1.0), abs=1e-10)
        assert wave.profile.psi[-1] == pytest.approx(h, rel=1e-10)


def test_cbar_bounds_and_span(constant_pair, constant_wave):
    """ test d(c_bar) = 2 and 0 < c_bar < pi a_sup / 2 """
    assert 0 < constant_wave.c < np.pi / 2
    assert span(constant_pair, constant_wave.c) == pytest.approx(2.0, abs=1e-9)
    assert constant_wave.residual <= constant_wave.tol


def test_cbar_profile_shape(constant_wave):
    """ test the ends, the minimum and the height bound a_sup / (-b_sup) """
    profile = constant_wave.profile
    assert profile.x_range == pytest.approx((-1.0, 1.0), abs=1e-9)
    assert 0.0 <= profile.phi.min() < 1e-5
    assert 0 < constant_wave.height < 2.0
    assert np.isinf(profile.psi[-1]) and np.isinf(profile.psi[0])
    assert np.all(np.diff(profile.x) > 0)
    phi, _ = constant_wave.evaluate(np.array([-0.5, 0.5]))
    assert phi[0] == pytest.approx(phi[1], abs=1e-10)


def test_cbar_against_shooting(constant_pair, constant_wave):
    """ test the quadrature profile against direct integration of the profile ODE """
    x = np.linspace(-0.8, 0.8, 33)
    phi_shoot, psi_shoot = shoot_profile(constant_pair, constant_wave.c, x)
    phi, psi = constant_wave.evaluate(x)
    np.testing.assert_allclose(phi, phi_shoot, atol=1e-7)
    np.testing.assert_allclose(psi, psi_shoot, rtol=1e-6, atol=1e-7)


def test_c_of_h_monotone(constant_pair, constant_wave):
    """ test 0 < c(h) < min(c_bar, a_sup arctan h), increasing in h """
    speeds = []
    for h in (2.0, 5.0, 20.0, 200.0):
        wave = solve_c_of_h(constant_pair, h)
        assert span_h(constant_pair, wave.c, h) == pytest.approx(2.0, abs=1e-9)
        assert 0 < wave.c < min(constant_wave.c, math.atan(h))
        speeds.append(wave.c)
    assert np.all(np.diff(speeds) > 0)
    assert speeds[-1] == pytest.approx(constant_wave.c, rel=1e-2)


def test_c_of_h_hypothesis(constant_pair):
    """ test that a0 h > -b0 sqrt(1 + h^2) is required """
    with pytest.raises(HypothesisViolationError, match="sqrt"):
        solve_c_of_h(constant_pair, 0.3)


def test_c_of_h_infinite_is_cbar(constant_pair, constant_wave):
    """ test that h = inf gives the wave with vertical ends """
    assert solve_c_of_h(constant_pair, math.inf).c == pytest.approx(constant_wave.c, abs=1e-12)


def test_cbar_requires_dominance():
    """ test that a0 <= -b0 is rejected """
    with pytest.raises(HypothesisViolationError):
        solve_cbar(ConstantPair(alpha=0.4, beta=0.5))


def test_asymmetric_wave(skewed_pair):
    """ test the wave of an asymmetric pair spans [-1, 1] """
    wave = solve_cbar(skewed_pair)
    assert wave.x_plus - wave.x_minus == pytest.approx(2.0, abs=1e-9)
    assert abs(wave.x_plus - 1.0) > 1e-4
    assert wave.profile.x_range == pytest.approx((-1.0, 1.0), abs=1e-8)


def test_bump_wave_between_constant_bounds(bump_pair):
    """ test that c_bar lies between the speeds of the constant bounding pairs """
    c = solve_cbar(bump_pair).c
    lower, upper = bump_pair.constant_bounds()
    assert solve_cbar(lower).c <= c <= solve_cbar(upper).c


def test_reconstruct_profile_needs_positive_speed(constant_pair):
    """ test that c <= 0 is rejected """
    with pytest.raises(ValueError):
        reconstruct_profile(constant_pair, 0.0)


def test_stationary_circle(constant_pair, constant_stationary):
    """ test phi(x;0) = 2 - sqrt(4 - x^2) and M for a = 1, b = -1/2 """
    profile = constant_stationary.profile
    assert profile.x_range == (-1.0, 1.0)
    x = np.linspace(-1.0, 1.0, 41)
    phi, _ = constant_stationary.evaluate(x)
    np.testing.assert_allclose(phi, 2 - np.sqrt(4 - x * x), atol=1e-9)
    expected_m = 1 / math.sqrt(3) - (2 - math.sqrt(3))
    assert constant_stationary.M == pytest.approx(expected_m, abs=1e-9)
    assert constant_stationary.threshold == pytest.approx(1 / math.sqrt(3), abs=1e-9)


def test_stationary_against_shooting(bump_pair):
    """ test the zero-speed profile against the shooting integrator """
    stationary = stationary_profile(bump_pair)
    x = np.linspace(-0.95, 0.95, 21)
    phi_shoot, _ = shoot_profile(bump_pair, 0.0, x)
    np.testing.assert_allclose(stationary.evaluate(x)[0], phi_shoot, atol=1e-7)


def test_stationary_needs_negative_b(grim_reaper_pair):
    """ test that the zero-speed profile does not exist when b vanishes """
    with pytest.raises(HypothesisViolationError):
        stationary_profile(grim_reaper_pair)


def test_span_decreases_on_a_fine_grid(constant_pair, bump_pair):
    """ test that d(c) decreases strictly over 50 speeds """
    for pair in (constant_pair, bump_pair):
        c = np.linspace(0.05, 0.95 * np.pi * pair.extrema().a_sup / 2, 50)
        spans = [span(pair, ci) for ci in c]
        assert np.all(np.diff(spans) < 0)


@pytest.mark.slow
def test_c_of_h_increases_to_cbar(constant_pair, constant_wave):
    """ test that c(h) increases over 20 slopes and is within 1e-3 of c_bar at h = 1e3 """
    hs = np.geomspace(1.5, 1e3, 20)
    speeds = [solve_c_of_h(constant_pair, h, n=256).c for h in hs]
    assert np.all(np.diff(speeds) > 0)
    assert 0 < constant_wave.c - speeds[-1] < 1e-3


@pytest.mark.slow
def test_bump_pair_bounds(bump_pair):
    """ test 0 < c(h) < a_sup arctan h and the height bound a_sup / (-b_sup) for the rational-bump pair """
    ext = bump_pair.extrema()
    wave = solve_cbar(bump_pair)
    assert 0 < wave.c < np.pi * ext.a_sup / 2
    assert wave.height <= ext.a_sup / (-ext.b_sup) + 1e-6
    for h in (2.0, 5.0, 20.0):
        assert 0 < solve_c_of_h(bump_pair, h).c < ext.a_sup * math.atan(h)


@pytest.mark.slow
def test_bump_profiles_against_shooting(bump_pair):
    """ test the quadrature profiles of the rational-bump pair at c_bar and c(5) against direct integration """
    x = np.linspace(-0.9, 0.9, 37)
    for wave in (solve_cbar(bump_pair), solve_c_of_h(bump_pair, 5.0)):
        phi_shoot, psi_shoot = shoot_profile(bump_pair, wave.c, x)
        phi, psi = wave.evaluate(x)
        np.testing.assert_allclose(phi, phi_shoot, atol=1e-6)
        np.testing.assert_allclose(psi, psi_shoot, rtol=1e-6, atol=1e-6)


def test_unmet_tolerance_is_an_error(constant_pair, monkeypatch):
    """ test that a root leaving |d - 2| above tol raises instead of returning """
    from bandflow.core.root_finding import Root, monotone_root
    from bandflow.waves import traveling_wave

    def loose_root(f, lo, hi, xtol=1e-15):
        return Root(monotone_root(f, lo, hi, xtol).x, 1e-3)

    monkeypatch.setattr(traveling_wave, "monotone_root", loose_root)
    with pytest.raises(QuadratureAccuracyError):
        solve_cbar(constant_pair, tol=1e-10)
    with pytest.raises(QuadratureAccuracyError):
        solve_c_of_h(constant_pair, 5.0, tol=1e-10)
    assert solve_cbar(constant_pair, tol=1e-2).c > 0
