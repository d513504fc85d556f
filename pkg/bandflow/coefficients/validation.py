from dataclasses import dataclass, field
from enum import Flag

import numpy as np

from bandflow.core.quadrature import adaptive_integral, condition_integrand
from bandflow.errors import HypothesisViolationError

from .base import CoefficientPair, sample_slopes

EVEN_TOL = 1e-12


class Requirement(Flag):
    SIGN = 1
    EVEN = 2
    DOMINANCE = 4  # a0 > -b0
    RIGHT_INTEGRAL = 8
    LEFT_INTEGRAL = 16
    WAVE = 5
    SYMMETRIC_WAVE = 7
    ALL = 31


_INEQUALITIES = {
    Requirement.SIGN: "a(p) > 0 > b(p)",
    Requirement.EVEN: "a(p) = a(-p), b(p) = b(-p)",
    Requirement.DOMINANCE: "a0 > -b0",
    Requirement.RIGHT_INTEGRAL: "int_0^inf a dr / (-b (1+r^2)^(3/2)) > 1",
    Requirement.LEFT_INTEGRAL: "int_-inf^0 a dr / (-b (1+r^2)^(3/2)) > 1",
}


@dataclass(frozen=True)
class ValidationItem:
    requirement: Requirement
    passed: bool
    measured: float

    @property
    def inequality(self) -> str:
        return _INEQUALITIES[self.requirement]


@dataclass(frozen=True)
class ValidationReport:
    items: list[ValidationItem] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def failures(self) -> list[ValidationItem]:
        return [item for item in self.items if not item.passed]

    def require(self) -> None:
        """
        Raise HypothesisViolationError naming the first failed requirement.
        """
        for item in self.items:
            if not item.passed:
                raise HypothesisViolationError(item.inequality, measured=item.measured)


def condition_integral(pair: CoefficientPair, side: int) -> float:
    """
    Evaluate the integral conditions int a dr / (-b (1+r^2)^(3/2)) over the
    half line r > 0 (side = +1) or r < 0 (side = -1). Infinite when b vanishes.
    """
    if pair.degenerate:
        return float("inf")
    f = condition_integrand(pair)
    lo, hi = (0.0, np.pi / 2) if side > 0 else (-np.pi / 2, 0.0)
    return adaptive_integral(f, lo, hi)


def validate(pair: CoefficientPair, requirements: Requirement = Requirement.ALL) -> ValidationReport:
    """
    Check a coefficient pair against the hypotheses used downstream.

    Parameters
    ----------
    pair : CoefficientPair
        The coefficients.
    requirements : Requirement, optional
        Flags of the requirements to check, by default Requirement.ALL

    Returns
    -------
    ValidationReport
        One item per checked requirement; failures are reported, not raised.
    """
    items = []
    p = sample_slopes()
    if Requirement.SIGN in requirements:
        a, b, _, _ = pair.eval(p)
        if pair.degenerate:
            ok = bool(np.all(a > 0) and np.all(b == 0))
            measured = float(a.min())
        else:
            ok = bool(np.all(a > 0) and np.all(b < 0))
            measured = float(min(a.min(), -b.max()))
        items.append(ValidationItem(Requirement.SIGN, ok, measured))
    if Requirement.EVEN in requirements:
        a, b, _, _ = pair.eval(p)
        am, bm, _, _ = pair.eval(-p)
        gap = float(max(np.max(np.abs(a - am)), np.max(np.abs(b - bm))))
        items.append(ValidationItem(Requirement.EVEN, gap <= EVEN_TOL, gap))
    if Requirement.DOMINANCE in requirements:
        ext = pair.extrema()
        items.append(ValidationItem(Requirement.DOMINANCE, ext.a0 > -ext.b0, ext.a0 + ext.b0))
    for flag, side in ((Requirement.RIGHT_INTEGRAL, 1), (Requirement.LEFT_INTEGRAL, -1)):
        if flag in requirements:
            value = condition_integral(pair, side)
            items.append(ValidationItem(flag, value > 1.0, value))
    return ValidationReport(items)
