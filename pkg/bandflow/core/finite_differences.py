"""
Second-order finite differences on non-uniform nodes.

With h- = x_i - x_(i-1) and h+ = x_(i+1) - x_i the three-point formulas are

    u'(x_i)  ~ -h+/(h-(h- + h+)) u_(i-1) + (h+ - h-)/(h- h+) u_i + h-/(h+(h- + h+)) u_(i+1)
    u''(x_i) ~ 2/(h-(h- + h+)) u_(i-1) - 2/(h- h+) u_i + 2/(h+(h- + h+)) u_(i+1)
"""

from typing import NamedTuple

import numpy as np

from bandflow.constants import Side


class Stencil(NamedTuple):
    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    def apply(self, u: np.ndarray) -> np.ndarray:
        """Apply the stencil to the interior nodes of u."""
        return self.lower * u[:-2] + self.diag * u[1:-1] + self.upper * u[2:]


def spacings(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Return the left and right spacings h- and h+ of every interior node.
    """
    dx = np.diff(x)
    return dx[:-1], dx[1:]


def first_derivative_stencil(x: np.ndarray) -> Stencil:
    hm, hp = spacings(x)
    return Stencil(-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp)))


def second_derivative_stencil(x: np.ndarray) -> Stencil:
    hm, hp = spacings(x)
    return Stencil(2.0 / (hm * (hm + hp)), -2.0 / (hm * hp), 2.0 / (hp * (hm + hp)))


def interior_derivatives(u: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    First and second derivatives at the interior nodes x_1, ..., x_(n-2).

    Parameters
    ----------
    u : np.ndarray
        Nodal values.
    x : np.ndarray
        Strictly increasing nodes, at least three.

    Returns
    -------
    tuple[np.ndarray, np.ndarray]
        u_x and u_xx, each of length len(x) - 2.
    """
    u = np.asarray(u, dtype=float)
    x = np.asarray(x, dtype=float)
    return first_derivative_stencil(x).apply(u), second_derivative_stencil(x).apply(u)


def one_sided_first(u: np.ndarray, x: np.ndarray, side: Side) -> float:
    """
    Second-order one-sided first derivative at the left (Side.LEFT) or right
    (Side.RIGHT) end from the three nodes nearest to it.
    """
    if side == Side.LEFT:
        a, b = x[1] - x[0], x[2] - x[1]
        return float(-(2 * a + b) / (a * (a + b)) * u[0] + (a + b) / (a * b) * u[1] - a / (b * (a + b)) * u[2])
    a, b = x[-1] - x[-2], x[-2] - x[-3]
    return float((2 * a + b) / (a * (a + b)) * u[-1] - (a + b) / (a * b) * u[-2] + a / (b * (a + b)) * u[-3])
