import logging
from dataclasses import dataclass
from typing import Callable

from scipy.optimize import bisect

from bandflow.errors import HypothesisViolationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Root:
    x: float
    residual: float


def monotone_root(f: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-15) -> Root:
    """
    Find the root of a monotone function by bisection on a bracket [lo, hi]
    with f(lo) and f(hi) of opposite signs. A bracket end where f vanishes is
    returned as is.

    Parameters
    ----------
    f : Callable[[float], float]
        Continuous monotone function.
    lo : float
        Lower bracket end.
    hi : float
        Upper bracket end.
    xtol : float, optional
        Absolute tolerance on the root, by default 1e-15

    Returns
    -------
    Root
        The root and |f(root)|.
    """
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0:
        return Root(lo, 0.0)
    if f_hi == 0:
        return Root(hi, 0.0)
    if f_lo * f_hi > 0:
        raise HypothesisViolationError("f(lo) and f(hi) have opposite signs", lo=lo, hi=hi, f_lo=f_lo, f_hi=f_hi)
    x = bisect(f, lo, hi, xtol=xtol, rtol=8.9e-16, maxiter=400)
    residual = abs(f(x))
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug("bisection on [%.6g, %.6g]: root %.17g, residual %.3g", lo, hi, x, residual)
    return Root(float(x), float(residual))


def expand_lower_bracket(
    f: Callable[[float], float],
    start: float = 1.0,
    factor: float = 0.5,
    floor: float = 1e-12,
) -> float:
    """
    Shrink c geometrically from `start` until f(c) > 0.

    Parameters
    ----------
    f : Callable[[float], float]
        Function that is positive for small enough arguments.
    start : float, optional
        First argument tried, by default 1.0
    factor : float, optional
        Shrinking factor, by default 0.5
    floor : float, optional
        Smallest argument tried, by default 1e-12

    Returns
    -------
    float
        An argument with f > 0.

    Raises
    ------
    HypothesisViolationError
        If f(c) <= 0 down to `floor`.
    """
    c = start
    value = f(c)
    while value <= 0:
        if c <= floor:
            raise HypothesisViolationError("d(c) > 2 for some small c > 0", c=c, d_minus_2_at_floor=value)
        c = max(c * factor, floor)
        value = f(c)
    return c
