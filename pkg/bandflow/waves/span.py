"""
Span integrals of the traveling-wave profile.

With psi = phi' the profile equation c = a(psi) psi' / (1 + psi^2) + b(psi) sqrt(1 + psi^2)
reads dx = a(psi) dpsi / ((1 + psi^2)(c - b(psi) sqrt(1 + psi^2))), so the half
widths X+-(c) of the profile are integrals over the slope. They are evaluated
in the angle variable (see `bandflow.core.quadrature`).
"""

import math

import numpy as np

from bandflow.coefficients import CoefficientPair
from bandflow.constants import Side
from bandflow.core.quadrature import adaptive_integral, span_integrand
from bandflow.errors import DivergentIntegralError


def _check_speed(pair: CoefficientPair, c: float) -> None:
    if not math.isfinite(c) or c < 0:
        raise ValueError(f"wave speed must be finite and non-negative, got c={c!r}")
    if c == 0 and (pair.degenerate or pair.extrema().b_sup >= 0):
        raise DivergentIntegralError(c)


def _half_span(pair: CoefficientPair, c: float, limit: float, side: Side) -> float:
    _check_speed(pair, c)
    f = span_integrand(pair, c)
    if side == Side.RIGHT:
        return adaptive_integral(f, 0.0, limit)
    if pair.symmetric:
        return -adaptive_integral(f, 0.0, limit)
    return -adaptive_integral(f, -limit, 0.0)


def x_plus(pair: CoefficientPair, c: float) -> float:
    """
    Right half width X+(c) = int_0^inf a dr / ((1+r^2)(c - b sqrt(1+r^2))).

    Parameters
    ----------
    pair : CoefficientPair
        The coefficients.
    c : float
        Wave speed, c > 0 (c = 0 only when b < 0).

    Returns
    -------
    float
        X+(c) > 0.
    """
    return _half_span(pair, c, np.pi / 2, Side.RIGHT)


def x_minus(pair: CoefficientPair, c: float) -> float:
    """
    Left end X-(c) = -int_-inf^0 a dr / ((1+r^2)(c - b sqrt(1+r^2))) < 0.
    """
    return _half_span(pair, c, np.pi / 2, Side.LEFT)


def x_h(pair: CoefficientPair, c: float, h: float, side: Side = Side.RIGHT) -> float:
    """
    Finite-slope half spans X+_h(c) (integral over r in [0, h]) and
    X-_h(c) (minus the integral over [-h, 0]).

    Parameters
    ----------
    pair : CoefficientPair
        The coefficients.
    c : float
        Wave speed.
    h : float
        Boundary slope, h > 0; h = inf gives x_plus / x_minus.
    side : Side, optional
        Side.RIGHT for X+_h and Side.LEFT for X-_h, by default Side.RIGHT

    Returns
    -------
    float
        The signed half span.
    """
    if not h > 0:
        raise ValueError(f"boundary slope must be positive, got h={h!r}")
    return _half_span(pair, c, float(np.arctan(h)), Side(side))


def span(pair: CoefficientPair, c: float) -> float:
    """
    d(c) = X+(c) - X-(c), strictly decreasing in c.
    """
    return x_plus(pair, c) - x_minus(pair, c)


def span_h(pair: CoefficientPair, c: float, h: float) -> float:
    """
    d_h(c) = X+_h(c) - X-_h(c).
    """
    return x_h(pair, c, h, Side.RIGHT) - x_h(pair, c, h, Side.LEFT)


def comparison_spans(pair: CoefficientPair, c: float) -> tuple[float, float]:
    """
    Half widths X(a0, b0, c) and X(a_sup, b_sup, c) of the constant-coefficient
    waves built on the extrema; X+(c) lies between them.
    """
    lower, upper = pair.constant_bounds()
    return x_plus(lower, c), x_plus(upper, c)
