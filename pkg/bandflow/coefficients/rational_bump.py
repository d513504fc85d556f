import numpy as np

from bandflow.constants import CoefficientFamily

from .base import CoefficientPair, CoefficientValues, Extrema


class RationalBumpPair(CoefficientPair):
    family = CoefficientFamily.RATIONAL_BUMP

    def __init__(self, alpha: float, eps: float, beta: float, delta: float = 0.0):
        """
        Even coefficients with a bump at the horizontal normal:

            a(p) = alpha + eps / (1 + p^2),   b(p) = -beta - delta / (1 + p^2)

        Parameters
        ----------
        alpha : float
            Limit of a as |p| -> infinity.
        eps : float
            Height of the bump of a at p = 0.
        beta : float
            Limit of -b as |p| -> infinity.
        delta : float, optional
            Height of the bump of -b at p = 0, by default 0.0
        """
        self.alpha = float(alpha)
        self.eps = float(eps)
        self.beta = float(beta)
        self.delta = float(delta)
        self.symmetric = True

    def _values(self, p: np.ndarray) -> CoefficientValues:
        w = 1.0 / (1.0 + p * p)
        dw = -2.0 * p * w * w
        a = self.alpha + self.eps * w
        b = -self.beta - self.delta * w
        return CoefficientValues(a, b, self.eps * dw, -self.delta * dw)

    def extrema(self) -> Extrema:
        # monotone in |p|: the values at p = 0 and |p| -> infinity bracket everything
        a_ends = (self.alpha, self.alpha + self.eps)
        b_ends = (-self.beta, -self.beta - self.delta)
        return Extrema(min(a_ends), max(a_ends), min(b_ends), max(b_ends))

    def parameters(self) -> dict:
        return {"alpha": self.alpha, "eps": self.eps, "beta": self.beta, "delta": self.delta}
