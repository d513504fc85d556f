from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from bandflow.constants import EXTREMA_NODES, CoefficientFamily
from bandflow.errors import CoefficientDomainError


@dataclass(frozen=True)
class Extrema:
    a0: float
    a_sup: float
    b0: float
    b_sup: float

    @property
    def dominant(self) -> bool:
        """True when a0 > -b0."""
        return self.a0 > -self.b0


@dataclass(frozen=True)
class CoefficientValues:
    a: np.ndarray
    b: np.ndarray
    da: np.ndarray
    db: np.ndarray

    def __iter__(self):
        return iter((self.a, self.b, self.da, self.db))


def sample_slopes(n: int = EXTREMA_NODES) -> np.ndarray:
    """
    Slopes p = tan(omega) on an angle grid of [-pi/2, pi/2], with the two
    end angles mapped to +-1e8, together with p in {0, +-1}.
    """
    omega = np.linspace(-np.pi / 2, np.pi / 2, n)
    p = np.tan(omega)
    p[0], p[-1] = -1e8, 1e8
    return np.unique(np.concatenate([p, [-1.0, 0.0, 1.0]]))


class CoefficientPair(ABC):
    """
    The anisotropy functions a(p) = A(n) and b(p) = B(n) evaluated on the
    upward normal n = (-p, 1)/sqrt(1 + p^2) of a graph with slope p.
    """

    family: CoefficientFamily
    symmetric: bool = False
    degenerate: bool = False

    @abstractmethod
    def _values(self, p: np.ndarray) -> CoefficientValues:
        """
        Compute a, b, a' and b' on an array of slopes.

        Parameters
        ----------
        p : np.ndarray
            Slopes.

        Returns
        -------
        CoefficientValues
            Function and derivative values, analytic per family.
        """

    @abstractmethod
    def extrema(self) -> Extrema:
        """
        Return min a, max a, min b and max b over all slopes.
        """

    @abstractmethod
    def parameters(self) -> dict:
        """
        Return the family parameters by name.
        """

    def eval(self, p):
        """
        Evaluate a, b, a' and b' at the slope(s) p.

        Parameters
        ----------
        p : float or array_like
            Finite slope(s).

        Returns
        -------
        tuple
            (a, b, a', b'), floats for a scalar p and arrays otherwise.
        """
        scalar = np.ndim(p) == 0
        p_arr = np.atleast_1d(np.asarray(p, dtype=float))
        if not np.all(np.isfinite(p_arr)):
            raise ValueError("slopes must be finite")
        values = self._values(p_arr)
        for name, arr in zip(("a", "b", "da", "db"), values):
            if not np.all(np.isfinite(arr)):
                raise CoefficientDomainError(self.family.value, self._offending_parameter(), f"{name} not finite")
        if scalar:
            return tuple(float(v[0]) for v in values)
        return tuple(values)

    def _offending_parameter(self) -> str:
        for name, value in self.parameters().items():
            if not np.all(np.isfinite(np.asarray(value, dtype=float))):
                return name
        return next(iter(self.parameters()), "?")

    def angle_values(self, omega: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """
        Return a(tan omega) and b(tan omega) on angles in [-pi/2, pi/2]; the
        end angles are evaluated at slopes +-1e16, i.e. at the limits.
        """
        omega = np.asarray(omega, dtype=float)
        p = np.tan(np.clip(omega, -np.pi / 2, np.pi / 2))
        p = np.clip(p, -1e16, 1e16)
        a, b, _, _ = self.eval(p)
        return a, b

    def constant_bounds(self) -> tuple["CoefficientPair", "CoefficientPair"]:
        """
        Constant pairs (a0, b0) and (a_sup, b_sup) built on the extrema.
        """
        from bandflow.coefficients.constant import ConstantPair

        ext = self.extrema()
        lower = ConstantPair(alpha=ext.a0, beta=-ext.b0, degenerate=ext.b0 == 0)
        upper = ConstantPair(alpha=ext.a_sup, beta=-ext.b_sup, degenerate=ext.b_sup == 0)
        return lower, upper

    def describe(self) -> dict:
        return {
            "family": self.family.value,
            "symmetric": self.symmetric,
            "degenerate": self.degenerate,
            **{k: v for k, v in self.parameters().items() if np.ndim(v) == 0},
        }

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v!r}" for k, v in self.parameters().items() if np.ndim(v) == 0)
        return f"{type(self).__name__}({params})"
