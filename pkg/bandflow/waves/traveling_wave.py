"""
Cup-like traveling waves u = Phi(x) + c t of the band flow.

The speed is the root of the monotone span relation d(c) = 2 (or d_h(c) = 2
for a finite boundary slope h) and the profile is rebuilt by cumulative
quadrature in the angle of the normal.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from bandflow.coefficients import CoefficientPair, Requirement, validate
from bandflow.constants import PROFILE_NODES, ROOT_TOL, Side
from bandflow.core.quadrature import adaptive_integral, cumulative_from_zero, slope_integrand, span_integrand
from bandflow.core.root_finding import expand_lower_bracket, monotone_root
from bandflow.errors import HypothesisViolationError, QuadratureAccuracyError
from bandflow.utils import chebyshev_angles

from .profile import Profile
from .span import span, span_h, x_h, x_minus, x_plus

logger = logging.getLogger(__name__)

BRACKET_SLACK = 1e-9


@dataclass(eq=False)
class WaveSolution:
    c: float
    h: float
    profile: Profile
    x_plus: float
    x_minus: float
    height: float
    tol: float
    residual: float

    def evaluate(self, x):
        """(Phi(x), Phi'(x)) on the shifted domain."""
        return self.profile.evaluate(x)

    def to_summary(self) -> dict:
        return {
            "c": self.c,
            "h": self.h,
            "x_plus": self.x_plus,
            "x_minus": self.x_minus,
            "height": self.height,
            "tol": self.tol,
        }


@dataclass(eq=False)
class StationaryProfile:
    """
    The zero-speed profile phi(x;0) on [-1, 1] with phi(0;0) = phi'(0;0) = 0,
    and the smallest M with phi'(1;0) <= phi(1;0) + M and
    phi'(-1;0) >= -(phi(-1;0) + M).
    """

    profile: Profile
    M: float

    @property
    def threshold(self) -> float:
        """max over [-1, 1] of phi(x;0) + M, attained at an end by convexity."""
        return float(max(self.profile.phi[0], self.profile.phi[-1]) + self.M)

    def evaluate(self, x):
        return self.profile.evaluate(x)

    def floor(self, x) -> np.ndarray:
        """phi(x;0) + M, the admissibility floor of initial data."""
        return np.asarray(self.profile.evaluate(x)[0]) + self.M


def reconstruct_profile(
    pair: CoefficientPair,
    c: float,
    h: float = math.inf,
    n: int = PROFILE_NODES,
) -> Profile:
    """
    Rebuild the profile of the wave with speed c and boundary slope h.

    Parameters
    ----------
    pair : CoefficientPair
        The coefficients.
    c : float
        Wave speed, c > 0.
    h : float, optional
        Boundary slope, by default math.inf
    n : int, optional
        Number of Chebyshev-spaced angle nodes, by default 2048

    Returns
    -------
    Profile
        Samples with the right end at x = 1 and the minimum value 0.
    """
    if not c > 0:
        raise ValueError(f"profile reconstruction needs c > 0, got c={c!r}")
    half_width = float(np.arctan(h))
    # the height is infinite when b vanishes, so the ends are left out
    closed = not (math.isinf(h) and pair.extrema().b_sup >= 0)
    omega = chebyshev_angles(n, half_width, closed=closed)
    x_rel = cumulative_from_zero(span_integrand(pair, c), omega)
    phi = cumulative_from_zero(slope_integrand(pair, c), omega)
    shift = 1.0 - x_h(pair, c, h, Side.RIGHT)
    return Profile(omega, x_rel + shift, phi)


def _wave(pair: CoefficientPair, c: float, h: float, tol: float, residual: float, n: int) -> WaveSolution:
    profile = reconstruct_profile(pair, c, h, n)
    if math.isinf(h):
        xp, xm = x_plus(pair, c), x_minus(pair, c)
        height = profile.height if pair.extrema().b_sup < 0 else math.inf
    else:
        xp, xm = x_h(pair, c, h, Side.RIGHT), x_h(pair, c, h, Side.LEFT)
        height = profile.height
    if residual > tol:
        raise QuadratureAccuracyError(c, residual, f"|d - 2| = {residual:.3g} above tol = {tol:.3g}")
    return WaveSolution(c, h, profile, xp, xm, height, tol, residual)


def solve_cbar(pair: CoefficientPair, tol: float = ROOT_TOL, n: int = PROFILE_NODES) -> WaveSolution:
    """
    Speed and profile of the wave with infinite boundary slopes.

    Parameters
    ----------
    pair : CoefficientPair
        Coefficients with a(p) > 0 > b(p) (or b = 0 under the degenerate flag)
        and a0 > -b0.
    tol : float, optional
        Tolerance on |d(c) - 2|, by default 1e-10
    n : int, optional
        Number of profile nodes, by default 2048

    Returns
    -------
    WaveSolution
        c_bar with 0 < c_bar < pi a_sup / 2 and its profile.

    Raises
    ------
    HypothesisViolationError
        If the coefficients are inadmissible or d(c) <= 2 down to c = 1e-12.
    QuadratureAccuracyError
        If the root leaves |d(c) - 2| above tol.
    """
    validate(pair, Requirement.WAVE).require()
    ext = pair.extrema()

    def excess(c: float) -> float:
        return span(pair, c) - 2.0

    # the root reaches the bound when b = 0 and a is constant
    c_hi = np.pi * ext.a_sup / 2.0 * (1.0 + BRACKET_SLACK)
    try:
        c_lo = expand_lower_bracket(excess, start=min(1.0, 0.5 * c_hi))
    except HypothesisViolationError:
        raise HypothesisViolationError("d(c) > 2 for small c > 0", d_at_1e_12=excess(1e-12) + 2.0) from None
    root = monotone_root(excess, c_lo, c_hi)
    logger.info("c_bar = %.15g (|d - 2| = %.2e)", root.x, root.residual)
    return _wave(pair, root.x, math.inf, tol, root.residual, n)


def solve_c_of_h(pair: CoefficientPair, h: float, tol: float = ROOT_TOL, n: int = PROFILE_NODES) -> WaveSolution:
    """
    Speed c(h) and profile Phi(x;h) of the wave with boundary slopes +-h.

    Parameters
    ----------
    pair : CoefficientPair
        Coefficients with a(p) > 0 > b(p).
    h : float
        Boundary slope with a0 h > -b0 sqrt(1 + h^2).
    tol : float, optional
        Tolerance on |d_h(c) - 2|, by default 1e-10
    n : int, optional
        Number of profile nodes, by default 2048

    Returns
    -------
    WaveSolution
        c(h) with 0 < c(h) < a_sup arctan(h) and Phi(x;h) with Phi'(+-1;h) = +-h.

    Raises
    ------
    HypothesisViolationError
        If the coefficients or h violate the hypotheses.
    QuadratureAccuracyError
        If the root leaves |d_h(c) - 2| above tol.
    """
    if math.isinf(h):
        return solve_cbar(pair, tol, n)
    validate(pair, Requirement.SIGN).require()
    ext = pair.extrema()
    if not ext.a0 * h > -ext.b0 * math.sqrt(1.0 + h * h):
        raise HypothesisViolationError("a0 h > -b0 sqrt(1 + h^2)", h=h, a0=ext.a0, b0=ext.b0)

    def excess(c: float) -> float:
        return span_h(pair, c, h) - 2.0

    c_hi = ext.a_sup * math.atan(h) * (1.0 + BRACKET_SLACK)
    c_lo = 0.0 if ext.b_sup < 0 else expand_lower_bracket(excess, start=0.5 * c_hi)
    root = monotone_root(excess, c_lo, c_hi)
    logger.info("c(%g) = %.15g (|d_h - 2| = %.2e)", h, root.x, root.residual)
    return _wave(pair, root.x, h, tol, root.residual, n)


def stationary_profile(pair: CoefficientPair, n: int = PROFILE_NODES) -> StationaryProfile:
    """
    The zero-speed profile phi(x;0) over [-1, 1] and the constant M.

    Parameters
    ----------
    pair : CoefficientPair
        Coefficients with a(p) > 0 > b(p) and a0 > -b0.
    n : int, optional
        Number of profile nodes, by default 2048

    Returns
    -------
    StationaryProfile
        The profile (not shifted, phi(0;0) = 0) and M; M may be negative.
    """
    validate(pair, Requirement.WAVE).require()
    if pair.extrema().b_sup >= 0:
        raise HypothesisViolationError("b < 0 for the zero-speed profile", b_sup=pair.extrema().b_sup)
    f = span_integrand(pair, 0.0)
    reach_right = x_plus(pair, 0.0)
    reach_left = -x_minus(pair, 0.0)
    if not (reach_right > 1.0 and reach_left > 1.0):
        raise HypothesisViolationError("X+(0) > 1 and -X-(0) > 1", x_plus_0=reach_right, x_minus_0=-reach_left)
    w_right = monotone_root(lambda w: adaptive_integral(f, 0.0, w) - 1.0, 0.0, np.pi / 2, xtol=1e-14).x
    w_left = monotone_root(lambda w: adaptive_integral(f, w, 0.0) - 1.0, -np.pi / 2, 0.0, xtol=1e-14).x
    k = np.arange(n)
    omega = 0.5 * (w_left + w_right) + 0.5 * (w_right - w_left) * -np.cos(np.pi * k / (n - 1))
    x = cumulative_from_zero(f, omega)
    x[0], x[-1] = -1.0, 1.0
    phi = cumulative_from_zero(slope_integrand(pair, 0.0), omega)
    M = max(math.tan(w_right) - phi[-1], -math.tan(w_left) - phi[0])
    if M < 0:
        logger.warning("M = %.6g is negative for %r", M, pair)
    return StationaryProfile(Profile(omega, x, phi), float(M))


def shoot_profile(pair: CoefficientPair, c: float, x_eval, rtol: float = 1e-10, atol: float = 1e-12):
    """
    Integrate phi'' = (1 + phi'^2) / a(phi') [c - b(phi') sqrt(1 + phi'^2)]
    from phi(0) = phi'(0) = 0 with the explicit Runge-Kutta 8(5,3) integrator.

    Parameters
    ----------
    pair : CoefficientPair
        The coefficients.
    c : float
        Wave speed (c = 0 gives the stationary profile).
    x_eval : array_like
        Abscissae relative to the minimum point, inside the existence interval.
    rtol, atol : float, optional
        Integrator tolerances.

    Returns
    -------
    tuple[np.ndarray, np.ndarray]
        phi and phi' at x_eval.
    """

    def rhs(_x, y):
        psi = y[1]
        a, b, _, _ = pair.eval(psi)
        q = 1.0 + psi * psi
        return [psi, q / a * (c - b * math.sqrt(q))]

    x_eval = np.asarray(x_eval, dtype=float)
    phi = np.full_like(x_eval, np.nan)
    psi = np.full_like(x_eval, np.nan)
    for sign in (1.0, -1.0):
        mask = x_eval >= 0 if sign > 0 else x_eval < 0
        if not np.any(mask):
            continue
        targets = x_eval[mask]
        order = np.argsort(sign * targets)
        t_eval = targets[order]
        sol = solve_ivp(rhs, (0.0, t_eval[-1]), [0.0, 0.0], method="DOP853", t_eval=t_eval, rtol=rtol, atol=atol)
        if not sol.success:
            raise HypothesisViolationError("shooting reaches the requested abscissae", reached=float(sol.t[-1]))
        idx = np.flatnonzero(mask)[order]
        phi[idx] = sol.y[0]
        psi[idx] = sol.y[1]
    return phi, psi
