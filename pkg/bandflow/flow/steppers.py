import logging
from abc import ABC, abstractmethod

import numpy as np
from scipy.linalg import solve_banded

from bandflow.coefficients import CoefficientPair
from bandflow.constants import CFL, Scheme
from bandflow.core.finite_differences import first_derivative_stencil, second_derivative_stencil
from bandflow.errors import BlowUpError

from .grid import GridState
from .operators import derivatives, speed

logger = logging.getLogger(__name__)


class TimeStepper(ABC):
    scheme: Scheme

    def __init__(self, pair: CoefficientPair):
        """
        Advance GridStates of the band flow by one time step.

        Parameters
        ----------
        pair : CoefficientPair
            The coefficients.
        """
        self.pair = pair

    @abstractmethod
    def _advance(self, state: GridState, dt: float) -> np.ndarray:
        """
        Compute the nodal values after a step of size dt.
        """

    def step(self, state: GridState, dt: float) -> GridState:
        """
        Advance the state by dt.

        Parameters
        ----------
        state : GridState
            A state with finite values.
        dt : float
            Step size, dt > 0.

        Returns
        -------
        GridState
            The state at time state.t + dt.

        Raises
        ------
        BlowUpError
            If the step produces non-finite values; the error carries `state`.
        """
        if not dt > 0:
            raise ValueError(f"time step must be positive, got dt={dt!r}")
        with np.errstate(all="ignore"):
            u = self._advance(state, dt)
        if not np.all(np.isfinite(u)):
            raise BlowUpError("non-finite values after a step", state, state.t)
        return state.replace(u, state.t + dt)

    def stable_dt(self, state: GridState) -> float:
        """Largest stable step; unbounded for implicit schemes."""
        return float("inf")


class ExplicitStepper(TimeStepper):
    scheme = Scheme.EXPLICIT

    def __init__(self, pair: CoefficientPair, cfl: float = CFL):
        """
        Forward Euler on the method-of-lines system.

        Parameters
        ----------
        pair : CoefficientPair
            The coefficients.
        cfl : float, optional
            Safety factor of the diffusive stability bound, by default 0.4
        """
        super().__init__(pair)
        self.cfl = cfl

    def stable_dt(self, state: GridState) -> float:
        """
        cfl min dx^2 min(1 + u_x^2) / a_sup.
        """
        ux, _ = derivatives(state.u, state.x)
        return float(self.cfl * state.grid.min_dx**2 * np.min(1.0 + ux * ux) / self.pair.extrema().a_sup)

    def step(self, state: GridState, dt: float) -> GridState:
        bound = self.stable_dt(state)
        if dt > bound:
            raise BlowUpError(f"explicit step dt={dt:.3g} exceeds the stability bound {bound:.3g}", state, state.t)
        return super().step(state, dt)

    def _advance(self, state: GridState, dt: float) -> np.ndarray:
        ux, uxx = derivatives(state.u, state.x)
        return state.u + dt * speed(ux, uxx, self.pair)


class SemiImplicitStepper(TimeStepper):
    scheme = Scheme.SEMI_IMPLICIT

    def _advance(self, state: GridState, dt: float) -> np.ndarray:
        """
        Freeze k = a(u_x)/(1 + u_x^2) at the current step, linearize the
        source s(p) = b(p) sqrt(1 + p^2) about the current slope and solve

            (I - dt k D2 - dt s'(p) D1) u_new = u + dt (s - s'(p) p),

        where D2 is the second difference closed by the ghost nodes and D1 is
        the centered first difference, replaced at the ends by the imposed
        slopes -u(-1) and u(1).
        """
        u, x = state.u, state.x
        ux, _ = derivatives(u, x)
        a, b, _, db = self.pair.eval(ux)
        q = 1.0 + ux * ux
        root = np.sqrt(q)
        k = a / q
        source = b * root
        ds = db * root + b * ux / root

        n = len(u)
        lower = np.zeros(n)
        diag = np.zeros(n)
        upper = np.zeros(n)
        d2 = second_derivative_stencil(x)
        d1 = first_derivative_stencil(x)
        lower[1:-1] = k[1:-1] * d2.lower + ds[1:-1] * d1.lower
        diag[1:-1] = k[1:-1] * d2.diag + ds[1:-1] * d1.diag
        upper[1:-1] = k[1:-1] * d2.upper + ds[1:-1] * d1.upper
        h_left, h_right = x[1] - x[0], x[-1] - x[-2]
        diag[0] = k[0] * (-2.0 + 2.0 * h_left) / h_left**2 - ds[0]
        upper[0] = k[0] * 2.0 / h_left**2
        lower[-1] = k[-1] * 2.0 / h_right**2
        diag[-1] = k[-1] * (-2.0 + 2.0 * h_right) / h_right**2 + ds[-1]

        # banded layout: row 0 super-diagonal, row 1 diagonal, row 2 sub-diagonal
        ab = np.zeros((3, n))
        ab[0, 1:] = -dt * upper[:-1]
        ab[1, :] = 1.0 - dt * diag
        ab[2, :-1] = -dt * lower[1:]
        return solve_banded((1, 1), ab, u + dt * (source - ds * ux))


def make_stepper(pair: CoefficientPair, scheme: Scheme = Scheme.SEMI_IMPLICIT, cfl: float = CFL) -> TimeStepper:
    scheme = Scheme(scheme)
    if scheme == Scheme.EXPLICIT:
        return ExplicitStepper(pair, cfl)
    return SemiImplicitStepper(pair)


def step(state: GridState, pair: CoefficientPair, dt: float, scheme: Scheme = Scheme.SEMI_IMPLICIT) -> GridState:
    """
    Advance a state by one step of the chosen scheme.

    Parameters
    ----------
    state : GridState
        The current state.
    pair : CoefficientPair
        The coefficients.
    dt : float
        Step size.
    scheme : Scheme, optional
        Time discretization, by default Scheme.SEMI_IMPLICIT

    Returns
    -------
    GridState
        The advanced state.
    """
    return make_stepper(pair, scheme).step(state, dt)
