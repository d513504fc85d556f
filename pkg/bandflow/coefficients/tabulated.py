from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from bandflow.constants import EXTREMA_NODES, CoefficientFamily
from bandflow.errors import CoefficientDomainError

from .base import CoefficientPair, CoefficientValues, Extrema


class TabulatedPair(CoefficientPair):
    family = CoefficientFamily.TABULATED

    def __init__(
        self,
        omega,
        a_values,
        b_values,
        symmetric: bool = False,
        extrema_nodes: int = EXTREMA_NODES,
    ):
        """
        Coefficients tabulated in the angle of the normal, omega = arctan p,
        on [-pi/2, pi/2] and interpolated with cubic splines.

        Parameters
        ----------
        omega : array_like
            Strictly increasing angles covering [-pi/2, pi/2].
        a_values : array_like
            Values of A at the angles.
        b_values : array_like
            Values of B at the angles.
        symmetric : bool, optional
            True if the table is declared even in omega, by default False
        extrema_nodes : int, optional
            Resolution of the angle grid used for the extrema, by default 4096
        """
        self.omega = np.asarray(omega, dtype=float)
        self.a_values = np.asarray(a_values, dtype=float)
        self.b_values = np.asarray(b_values, dtype=float)
        self.symmetric = bool(symmetric)
        self.extrema_nodes = int(extrema_nodes)
        if self.omega.ndim != 1 or self.omega.shape != self.a_values.shape or self.omega.shape != self.b_values.shape:
            raise CoefficientDomainError(self.family.value, "omega", "omega, a and b must be 1-d of equal length")
        if len(self.omega) < 4 or np.any(np.diff(self.omega) <= 0):
            raise CoefficientDomainError(self.family.value, "omega", "need at least 4 strictly increasing angles")
        if self.omega[0] > -np.pi / 2 + 1e-12 or self.omega[-1] < np.pi / 2 - 1e-12:
            raise CoefficientDomainError(self.family.value, "omega", "the table must cover [-pi/2, pi/2]")
        self._a = CubicSpline(self.omega, self.a_values)
        self._b = CubicSpline(self.omega, self.b_values)

    @classmethod
    def from_csv(cls, path, symmetric: bool = False) -> "TabulatedPair":
        """
        Read a table with header `omega,a,b`.
        """
        data = np.loadtxt(Path(path), delimiter=",", skiprows=1, ndmin=2)
        return cls(data[:, 0], data[:, 1], data[:, 2], symmetric=symmetric)

    def _values(self, p: np.ndarray) -> CoefficientValues:
        omega = np.arctan(p)
        dw = 1.0 / (1.0 + p * p)
        return CoefficientValues(self._a(omega), self._b(omega), self._a(omega, 1) * dw, self._b(omega, 1) * dw)

    def extrema(self) -> Extrema:
        # Approximation on the angle grid; a and b are continuous in omega
        omega = np.linspace(-np.pi / 2, np.pi / 2, self.extrema_nodes)
        a = self._a(omega)
        b = self._b(omega)
        return Extrema(float(a.min()), float(a.max()), float(b.min()), float(b.max()))

    def parameters(self) -> dict:
        return {"omega": self.omega, "a_values": self.a_values, "b_values": self.b_values}
