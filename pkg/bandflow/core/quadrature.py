"""
Quadrature in the angle variable omega = arctan(r).

Substituting r = tan(omega) in the span integrals

    int a(r) dr / ((1 + r^2) (c - b(r) sqrt(1 + r^2)))

gives int a(tan w) cos w / (c cos w - b(tan w)) dw over a finite interval,
with an integrand that stays bounded at w = +-pi/2 whenever c > 0 or b < 0.
The slope-weighted integrand for the profile height is the same with
cos w replaced by sin w.
"""

import logging
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from bandflow.constants import QUAD_ATOL, QUAD_RTOL
from bandflow.errors import QuadratureAccuracyError

logger = logging.getLogger(__name__)


def span_integrand(pair, c: float) -> Callable:
    """
    Return the angle integrand of dx/domega for the wave speed c.

    Parameters
    ----------
    pair : CoefficientPair
        The coefficients.
    c : float
        Wave speed.

    Returns
    -------
    Callable
        omega -> a cos(omega) / (c cos(omega) - b), vectorized.
    """

    def integrand(omega):
        a, b = pair.angle_values(omega)
        cos = np.cos(omega)
        return a * cos / (c * cos - b)

    return integrand


def slope_integrand(pair, c: float) -> Callable:
    """
    Return the angle integrand of dphi/domega for the wave speed c.
    """

    def integrand(omega):
        a, b = pair.angle_values(omega)
        return a * np.sin(omega) / (c * np.cos(omega) - b)

    return integrand


def condition_integrand(pair) -> Callable:
    """
    Integrand a cos(omega) / (-b) of the conditions int a dr / (-b (1+r^2)^(3/2)) > 1.
    """

    def integrand(omega):
        a, b = pair.angle_values(omega)
        return a * np.cos(omega) / (-b)

    return integrand


def adaptive_integral(
    f: Callable,
    lo: float,
    hi: float,
    rtol: float = QUAD_RTOL,
    atol: float = QUAD_ATOL,
    limit: int = 200,
) -> float:
    """
    Integrate a scalar function with adaptive Gauss-Kronrod quadrature.

    Parameters
    ----------
    f : Callable
        The integrand.
    lo, hi : float
        Integration limits.
    rtol : float, optional
        Relative tolerance, by default 1e-10
    atol : float, optional
        Absolute tolerance, by default 1e-14
    limit : int, optional
        Maximum number of subintervals, by default 200

    Returns
    -------
    float
        The integral.

    Raises
    ------
    QuadratureAccuracyError
        If the error estimate stays above the requested tolerance.
    """
    if lo == hi:
        return 0.0
    result = quad(lambda w: float(f(w)), lo, hi, epsrel=rtol, epsabs=atol, limit=limit, full_output=1)
    value, error = result[0], result[1]
    if not np.isfinite(value):
        raise QuadratureAccuracyError(value, error, "non-finite integral")
    if len(result) > 3:
        # quad flagged a problem; accept it only if the estimate is within tolerance anyway
        allowed = max(atol, rtol * abs(value))
        if error > 10 * allowed:
            raise QuadratureAccuracyError(value, error, result[3].strip().splitlines()[0])
        logger.debug("quad warning on [%g, %g] accepted: error %.2e", lo, hi, error)
    return float(value)


def cumulative_from_zero(f: Callable, omega: np.ndarray, order: int = 8) -> np.ndarray:
    """
    Compute F(omega_k) = int_0^omega_k f for increasing nodes omega_k with a
    Gauss-Legendre rule on every panel between consecutive nodes.

    Parameters
    ----------
    f : Callable
        Vectorized integrand.
    omega : np.ndarray
        Strictly increasing nodes.
    order : int, optional
        Gauss-Legendre points per panel, by default 8

    Returns
    -------
    np.ndarray
        The cumulative integral at every node, zero at omega = 0.
    """
    breaks = np.union1d(omega, [0.0])
    x, w = leggauss(order)
    mid = 0.5 * (breaks[1:] + breaks[:-1])
    half = 0.5 * (breaks[1:] - breaks[:-1])
    points = mid[:, None] + half[:, None] * x[None, :]
    values = np.asarray(f(points.ravel()), dtype=float).reshape(points.shape)
    panels = half * (values @ w)
    cumulative = np.concatenate([[0.0], np.cumsum(panels)])
    cumulative -= cumulative[np.searchsorted(breaks, 0.0)]
    return cumulative[np.searchsorted(breaks, omega)]


def trapezoid_oracle(f: Callable, lo: float, hi: float, n: int = 1_000_000) -> float:
    """
    Brute-force composite trapezoid rule, used to cross-check `adaptive_integral`.
    """
    omega = np.linspace(lo, hi, n + 1)
    return float(np.trapezoid(f(omega), omega)) if hasattr(np, "trapezoid") else float(np.trapz(f(omega), omega))
