import numpy as np
import pytest

from bandflow.core.quadrature import (
    adaptive_integral,
    condition_integrand,
    cumulative_from_zero,
    slope_integrand,
    span_integrand,
    trapezoid_oracle,
)
from bandflow.errors import QuadratureAccuracyError


@pytest.mark.parametrize("c", [0.0, 0.3, 1.0, 2.5])
def test_span_integral_against_trapezoid(bump_pair, c):
    """ test the adaptive span integral against a brute-force trapezoid rule """
    f = span_integrand(bump_pair, c)
    value = adaptive_integral(f, 0.0, np.pi / 2)
    assert value == pytest.approx(trapezoid_oracle(f, 0.0, np.pi / 2), rel=1e-8)


def test_slope_integral_against_trapezoid(skewed_pair):
    """ test the slope-weighted integral on the left half of an asymmetric pair """
    f = slope_integrand(skewed_pair, 0.8)
    value = adaptive_integral(f, -np.pi / 2, 0.0)
    assert value == pytest.approx(trapezoid_oracle(f, -np.pi / 2, 0.0), rel=1e-8)
    assert value < 0


def test_span_integrand_grim_reaper(grim_reaper_pair):
    """ test that the integrand is 1/c when a = 1 and b = 0 """
    f = span_integrand(grim_reaper_pair, 2.0)
    np.testing.assert_allclose(f(np.linspace(-1.5, 1.5, 7)), 0.5)


def test_condition_integrand_is_bounded(constant_pair):
    """ test the condition integrand at the end angles """
    f = condition_integrand(constant_pair)
    values = f(np.array([-np.pi / 2, 0.0, np.pi / 2]))
    assert np.all(np.isfinite(values))
    assert values[1] == pytest.approx(2.0)


def test_empty_interval():
    """ test that an empty interval integrates to zero """
    assert adaptive_integral(np.cos, 0.3, 0.3) == 0.0


def test_non_finite_integral_raises():
    """ test that a non-finite integral is an accuracy error """
    with pytest.raises(QuadratureAccuracyError):
        adaptive_integral(lambda w: np.inf, 0.0, 1.0)


def test_cumulative_from_zero():
    """ test the panel rule on int_0^w cos = sin w, anchored at zero """
    omega = np.linspace(-1.4, 1.2, 50)
    np.testing.assert_allclose(cumulative_from_zero(np.cos, omega), np.sin(omega), atol=1e-13)


def test_cumulative_from_zero_without_zero_node():
    """ test nodes that do not contain zero """
    omega = np.array([0.2, 0.5, 0.9])
    np.testing.assert_allclose(cumulative_from_zero(np.cos, omega), np.sin(omega), atol=1e-13)
