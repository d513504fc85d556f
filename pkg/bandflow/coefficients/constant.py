import numpy as np

from bandflow.constants import CoefficientFamily
from bandflow.errors import CoefficientDomainError

from .base import CoefficientPair, CoefficientValues, Extrema


class ConstantPair(CoefficientPair):
    family = CoefficientFamily.CONSTANT

    def __init__(self, alpha: float, beta: float, degenerate: bool = False):
        """
        Constant coefficients a = alpha and b = -beta.

        Parameters
        ----------
        alpha : float
            Value of a.
        beta : float
            Value of -b.
        degenerate : bool, optional
            Must be True when beta == 0 (b vanishes identically, the grim
            reaper case), by default False
        """
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.degenerate = bool(degenerate)
        self.symmetric = True
        if self.beta == 0 and not self.degenerate:
            raise CoefficientDomainError(self.family.value, "beta", "b = 0 requires the degenerate flag")
        if self.degenerate and self.beta != 0:
            raise CoefficientDomainError(self.family.value, "beta", "the degenerate flag requires b = 0")

    def _values(self, p: np.ndarray) -> CoefficientValues:
        ones = np.ones_like(p)
        return CoefficientValues(self.alpha * ones, -self.beta * ones, 0.0 * ones, 0.0 * ones)

    def extrema(self) -> Extrema:
        return Extrema(self.alpha, self.alpha, -self.beta, -self.beta)

    def parameters(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta}
