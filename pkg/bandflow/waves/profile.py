from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline


@dataclass(eq=False)
class Profile:
    """
    Parametric samples of a convex profile in the angle variable omega:
    the abscissa x(omega), the height phi(omega) and the slope psi = tan(omega).
    """

    omega: np.ndarray
    x: np.ndarray
    phi: np.ndarray
    psi: np.ndarray = field(init=False)

    def __post_init__(self):
        self.omega = np.asarray(self.omega, dtype=float)
        self.x = np.asarray(self.x, dtype=float)
        self.phi = np.asarray(self.phi, dtype=float)
        self.psi = _slopes(self.omega)
        self._x_of = CubicSpline(self.omega, self.x)
        self._phi_of = CubicSpline(self.omega, self.phi)

    @property
    def height(self) -> float:
        """Value at the right end minus the minimum."""
        return float(self.phi[-1] - self.phi.min())

    @property
    def x_range(self) -> tuple[float, float]:
        return float(self.x[0]), float(self.x[-1])

    def at_angle(self, omega):
        """(x, phi) at the angle(s) omega, from the splines."""
        x, phi = self._x_of(omega), self._phi_of(omega)
        if np.ndim(omega) == 0:
            return float(x), float(phi)
        return x, phi

    def angle_at(self, x) -> np.ndarray:
        """
        Invert x(omega) at the abscissae x by interpolation followed by Newton
        polishing on the spline of x(omega).

        Parameters
        ----------
        x : float or array_like
            Abscissae inside the sampled range.

        Returns
        -------
        np.ndarray
            The angles omega(x).
        """
        xq = np.asarray(x, dtype=float)
        lo, hi = self.omega[0], self.omega[-1]
        start = np.interp(xq, self.x, self.omega)
        omega = start.copy()
        for _ in range(8):
            residual = self._x_of(omega) - xq
            slope = self._x_of(omega, 1)
            safe = slope > 1e-14
            omega = np.where(safe, omega - residual / np.where(safe, slope, 1.0), omega)
            omega = np.clip(omega, lo, hi)
        # keep whichever of the two estimates fits better
        worse = np.abs(self._x_of(omega) - xq) > np.abs(self._x_of(start) - xq)
        return np.where(worse, start, omega)

    def evaluate(self, x):
        """
        Profile value and slope at arbitrary abscissae.

        Parameters
        ----------
        x : float or array_like
            Abscissae inside the sampled range.

        Returns
        -------
        tuple
            (phi(x), phi'(x)), floats for a scalar x and arrays otherwise.
        """
        omega = self.angle_at(x)
        phi = self._phi_of(omega)
        psi = _slopes(omega)
        if np.ndim(x) == 0:
            return float(phi), float(psi)
        return phi, psi

    def to_columns(self) -> np.ndarray:
        """Columns x, phi, psi."""
        return np.column_stack([self.x, self.phi, self.psi])


def _slopes(omega: np.ndarray) -> np.ndarray:
    psi = np.tan(omega)
    # the closed ends of an infinite-slope profile carry infinite slope
    psi = np.where(np.isclose(np.abs(omega), np.pi / 2, rtol=0, atol=1e-15), np.sign(omega) * np.inf, psi)
    return psi
