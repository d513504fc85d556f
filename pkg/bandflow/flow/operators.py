"""
Spatial operators of the band flow

    u_t = a(u_x) u_xx / (1 + u_x^2) + b(u_x) sqrt(1 + u_x^2),   u_x(+-1, t) = +-u(+-1, t).

At an end node the Robin condition gives u_x directly and u_xx comes from a
ghost node at the mirrored distance h, eliminated through the centered
difference of the condition:

    u_xx(-1) ~ 2 (u_1 - u_0 + h u_0) / h^2,   u_xx(1) ~ 2 (u_(N-1) - u_N + h u_N) / h^2.
"""

import numpy as np

from bandflow.coefficients import CoefficientPair
from bandflow.constants import Side
from bandflow.core.finite_differences import interior_derivatives, one_sided_first

from .grid import GridState


def derivatives(u: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Discrete u_x and u_xx at every node, with the Robin closure at the ends.

    Parameters
    ----------
    u : np.ndarray
        Nodal values.
    x : np.ndarray
        Grid nodes from -1 to 1.

    Returns
    -------
    tuple[np.ndarray, np.ndarray]
        u_x and u_xx.
    """
    u = np.asarray(u, dtype=float)
    ux = np.empty_like(u)
    uxx = np.empty_like(u)
    ux[1:-1], uxx[1:-1] = interior_derivatives(u, x)
    h_left, h_right = x[1] - x[0], x[-1] - x[-2]
    ux[0], ux[-1] = -u[0], u[-1]
    uxx[0] = 2.0 * (u[1] - u[0] + h_left * u[0]) / h_left**2
    uxx[-1] = 2.0 * (u[-2] - u[-1] + h_right * u[-1]) / h_right**2
    return ux, uxx


def speed(ux: np.ndarray, uxx: np.ndarray, pair: CoefficientPair) -> np.ndarray:
    """
    a(u_x) u_xx / (1 + u_x^2) + b(u_x) sqrt(1 + u_x^2) on given derivatives.
    """
    a, b, _, _ = pair.eval(ux)
    q = 1.0 + ux * ux
    return a * uxx / q + b * np.sqrt(q)


def interior_rhs(u: np.ndarray, x: np.ndarray, pair: CoefficientPair) -> np.ndarray:
    """
    Right-hand side at the interior nodes of arbitrary node arrays; the end
    values act as Dirichlet data.
    """
    ux, uxx = interior_derivatives(u, x)
    return speed(ux, uxx, pair)


def rhs(state: GridState, pair: CoefficientPair) -> np.ndarray:
    """
    du/dt at every node of the state.

    Parameters
    ----------
    state : GridState
        The current state.
    pair : CoefficientPair
        The coefficients.

    Returns
    -------
    np.ndarray
        The time derivative, ends included.
    """
    ux, uxx = derivatives(state.u, state.x)
    return speed(ux, uxx, pair)


def boundary_residual(state: GridState) -> tuple[float, float]:
    """
    Residuals u_x(-1) + u(-1) and u_x(1) - u(1) of the Robin condition, with
    u_x from the second-order one-sided three-node differences.
    """
    u, x = state.u, state.x
    r_left = one_sided_first(u, x, Side.LEFT) + u[0]
    r_right = one_sided_first(u, x, Side.RIGHT) - u[-1]
    return float(r_left), float(r_right)


def wall_resolution(state: GridState) -> tuple[float, float]:
    """
    Mismatch between the imposed end slopes -u(-1), u(1) and the secant
    slopes of the end cells, relative to 1 + |u|. It grows like
    h |b| u^2 / (2a) with the end spacing h and reaches 1 where the
    discrete end node stalls, so small values mean a resolved boundary layer.
    """
    u, x = state.u, state.x
    left = abs(-u[0] - (u[1] - u[0]) / (x[1] - x[0])) / (1.0 + abs(u[0]))
    right = abs(u[-1] - (u[-1] - u[-2]) / (x[-1] - x[-2])) / (1.0 + abs(u[-1]))
    return float(left), float(right)


def theta_of(state: GridState) -> np.ndarray:
    """
    The normal angle theta = arctan u_x at every node. The end values use the
    one-sided differences so that theta(+-1) - (+-arctan u(+-1)) is bounded by
    the boundary residual.
    """
    u, x = state.u, state.x
    ux, _ = derivatives(u, x)
    ux[0] = one_sided_first(u, x, Side.LEFT)
    ux[-1] = one_sided_first(u, x, Side.RIGHT)
    return np.arctan(ux)


def theta_rhs(theta: np.ndarray, x: np.ndarray, pair: CoefficientPair) -> np.ndarray:
    """
    Interior right-hand side of the angle equation

        theta_t = a cos^2(theta) theta_xx + a' theta_x^2 + b' theta_x / cos(theta) + b sin(theta) theta_x

    with a, b and their derivatives taken at tan(theta).

    Parameters
    ----------
    theta : np.ndarray
        Nodal angles in (-pi/2, pi/2).
    x : np.ndarray
        Grid nodes.
    pair : CoefficientPair
        The coefficients.

    Returns
    -------
    np.ndarray
        theta_t at the interior nodes.
    """
    theta = np.asarray(theta, dtype=float)
    tx, txx = interior_derivatives(theta, x)
    inner = theta[1:-1]
    a, b, da, db = pair.eval(np.tan(inner))
    cos = np.cos(inner)
    return a * cos**2 * txx + da * tx**2 + db * tx / cos + b * np.sin(inner) * tx
