"""
Initial data of the band flow. Admissible data satisfy

    u0'(+-1) = +-u0(+-1)   and   u0(x) > phi(x;0) + M on [-1, 1].
"""

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from bandflow.coefficients import CoefficientPair, Requirement, validate
from bandflow.constants import DatumKind
from bandflow.core.root_finding import monotone_root
from bandflow.errors import IncompatibleDatumError, M1TooSmallError
from bandflow.waves import StationaryProfile, WaveSolution, solve_cbar, stationary_profile

from .grid import Grid, GridState

logger = logging.getLogger(__name__)

COMPATIBILITY_TOL = 1e-8
# slack on the coverage of [-1, 1] by tabulated abscissae
COVER_TOL = 1e-8
# column names of a written wave profile
COLUMN_ALIASES = {"phi": "u", "psi": "ux"}


class InitialDatum(ABC):
    kind: DatumKind

    @abstractmethod
    def values(self, x) -> tuple[np.ndarray, np.ndarray]:
        """
        Evaluate the datum and its derivative.

        Parameters
        ----------
        x : array_like
            Abscissae in [-1, 1].

        Returns
        -------
        tuple[np.ndarray, np.ndarray]
            u0(x) and u0'(x).
        """

    def parameters(self) -> dict:
        return {}

    def state(self, grid: Grid, t: float = 0.0) -> GridState:
        u, _ = self.values(grid.x)
        return GridState(grid, np.asarray(u, dtype=float), t, {"datum": self.kind.value})

    def describe(self) -> dict:
        return {"kind": self.kind.value, **self.parameters()}


class RhoDatum(InitialDatum):
    kind = DatumKind.RHO

    def __init__(self, wave: WaveSolution, p: float, M1: float):
        """
        rho(x) = Phi(p x) + M1 built on the wave with infinite boundary slopes.

        Parameters
        ----------
        wave : WaveSolution
            The even wave Phi with Phi(0) = 0.
        p : float
            Dilation in (0, 1) with p Phi'(p) = Phi(p) + M1.
        M1 : float
            Vertical lift.
        """
        self.wave = wave
        self.p = float(p)
        self.M1 = float(M1)

    def values(self, x):
        phi, psi = self.wave.evaluate(self.p * np.asarray(x, dtype=float))
        return np.asarray(phi) + self.M1, self.p * np.asarray(psi)

    def parameters(self) -> dict:
        return {"p": self.p, "M1": self.M1}


class FunctionDatum(InitialDatum):
    kind = DatumKind.USER

    def __init__(self, func: Callable, derivative: Callable, name: str = "user"):
        self.func = func
        self.derivative = derivative
        self.name = name

    def values(self, x):
        x = np.asarray(x, dtype=float)
        return np.asarray(self.func(x), dtype=float), np.asarray(self.derivative(x), dtype=float)

    def parameters(self) -> dict:
        return {"name": self.name}


class TabulatedDatum(InitialDatum):
    kind = DatumKind.TABULATED

    def __init__(self, x, u, ux=None):
        """
        Datum interpolated with a cubic spline from samples on [-1, 1].

        Parameters
        ----------
        x : array_like
            Strictly increasing abscissae from -1 to 1, up to COVER_TOL.
        u : array_like
            Values at x.
        ux : array_like, optional
            Derivatives at x; when given the Hermite spline is used, with
            non-finite entries replaced by the slopes of the plain spline,
            by default None
        """
        self.x = np.asarray(x, dtype=float)
        self.u = np.asarray(u, dtype=float)
        if self.x[0] > -1.0 + COVER_TOL or self.x[-1] < 1.0 - COVER_TOL:
            raise IncompatibleDatumError("tabulated datum must cover [-1, 1]")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.u))):
            raise IncompatibleDatumError("tabulated datum has non-finite abscissae or values")
        plain = CubicSpline(self.x, self.u)
        if ux is None:
            self._spline = plain
        else:
            ux = np.asarray(ux, dtype=float)
            bad = ~np.isfinite(ux)
            if np.any(bad):
                # the ends of a wave profile with infinite boundary slopes
                ux = np.where(bad, plain(self.x, 1), ux)
            self._spline = CubicHermiteSpline(self.x, self.u, ux)

    @classmethod
    def from_csv(cls, path) -> "TabulatedDatum":
        """
        Read a CSV file with a header naming the columns x, u and optionally
        ux. The columns x, phi, psi of a written wave profile are read as
        x, u, ux.
        """
        path = Path(path)
        with path.open() as f:
            header = [COLUMN_ALIASES.get(name.strip(), name.strip()) for name in f.readline().split(",")]
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        try:
            columns = {name: data[:, header.index(name)] for name in ("x", "u")}
        except ValueError:
            raise IncompatibleDatumError(f"{path} needs the columns x and u (or x and phi), found {header}") from None
        ux = data[:, header.index("ux")] if "ux" in header else None
        return cls(columns["x"], columns["u"], ux)

    def values(self, x):
        x = np.asarray(x, dtype=float)
        return self._spline(x), self._spline(x, 1)

    def parameters(self) -> dict:
        return {"samples": int(len(self.x))}


class WaveDatum(InitialDatum):
    kind = DatumKind.WAVE

    def __init__(self, wave: WaveSolution, shift: float = 0.0):
        """
        The wave profile lifted by `shift`, the initial value of the exact
        solution Phi(x) + shift + c t.
        """
        self.wave = wave
        self.shift = float(shift)

    def values(self, x):
        phi, psi = self.wave.evaluate(np.asarray(x, dtype=float))
        return np.asarray(phi) + self.shift, np.asarray(psi)

    def parameters(self) -> dict:
        return {"c": self.wave.c, "h": self.wave.h, "shift": self.shift}


def make_rho(
    pair: CoefficientPair,
    M1: float,
    wave: WaveSolution | None = None,
    stationary: StationaryProfile | None = None,
) -> RhoDatum:
    """
    Build rho(x) = Phi(p x) + M1 with p in (0, 1) solving p Phi'(p) = Phi(p) + M1.

    Parameters
    ----------
    pair : CoefficientPair
        Even coefficients.
    M1 : float
        Lift, larger than max over [-1, 1] of phi(x;0) + M.
    wave : WaveSolution, optional
        The wave with infinite boundary slopes, solved when not given.
    stationary : StationaryProfile, optional
        The zero-speed profile, solved when not given.

    Returns
    -------
    RhoDatum
        A compatible, convex and admissible datum.

    Raises
    ------
    M1TooSmallError
        If M1 does not exceed the admissibility threshold.
    """
    validate(pair, Requirement.SYMMETRIC_WAVE).require()
    stationary = stationary if stationary is not None else stationary_profile(pair)
    threshold = stationary.threshold
    if not M1 > threshold:
        raise M1TooSmallError(M1, threshold)
    wave = wave if wave is not None else solve_cbar(pair)

    def excess(omega: float) -> float:
        x, phi = wave.profile.at_angle(omega)
        return x * np.tan(omega) - phi - M1

    # in the angle p Phi'(p) - Phi(p) increases and blows up at pi/2
    omega = monotone_root(excess, 0.0, np.pi / 2 - 1e-12, xtol=1e-15).x
    p = float(wave.profile.at_angle(omega)[0])
    logger.info("rho: p = %.15g for M1 = %g (threshold %.6g)", p, M1, threshold)
    return RhoDatum(wave, p, M1)


def exponential_datum(stationary: StationaryProfile, margin: float = 1.0) -> FunctionDatum:
    """
    The compatible datum K exp(x^2 / 2) with K = max(phi(x;0) + M) + margin,
    admissible for pairs without symmetry.
    """
    if not margin > 0:
        raise ValueError(f"margin must be positive, got {margin!r}")
    K = stationary.threshold + margin

    def func(x):
        return K * np.exp(0.5 * x * x)

    def derivative(x):
        return K * x * np.exp(0.5 * x * x)

    return FunctionDatum(func, derivative, name=f"exp(K={K:.6g})")


def perturbed_datum(base: InitialDatum, kappa: float, mode: int = 1) -> FunctionDatum:
    """
    Add kappa (x^2 - 1)^2 s(x) with s(x) = sin(mode pi x) (s = 1 for mode 0).
    The perturbation and its slope vanish at x = +-1, so compatibility of the
    base datum is kept.

    Parameters
    ----------
    base : InitialDatum
        The datum to perturb.
    kappa : float
        Amplitude.
    mode : int, optional
        Frequency of the sine factor, by default 1

    Returns
    -------
    FunctionDatum
        The perturbed datum.
    """

    def shape(x):
        s = np.sin(mode * np.pi * x) if mode else np.ones_like(x)
        ds = mode * np.pi * np.cos(mode * np.pi * x) if mode else np.zeros_like(x)
        w = (x * x - 1.0) ** 2
        dw = 4.0 * x * (x * x - 1.0)
        return w * s, dw * s + w * ds

    def func(x):
        return base.values(x)[0] + kappa * shape(x)[0]

    def derivative(x):
        return base.values(x)[1] + kappa * shape(x)[1]

    return FunctionDatum(func, derivative, name=f"{base.kind.value}+{kappa:g}*mode{mode}")


def check_admissible(datum: InitialDatum, grid: Grid, stationary: StationaryProfile) -> GridState:
    """
    Validate a datum on a grid and return the initial state.

    Parameters
    ----------
    datum : InitialDatum
        The datum.
    grid : Grid
        The grid.
    stationary : StationaryProfile
        The zero-speed profile and M of the coefficients.

    Returns
    -------
    GridState
        The initial state at t = 0.

    Raises
    ------
    IncompatibleDatumError
        If u0'(+-1) = +-u0(+-1) fails within 1e-8 (1 + |u0(+-1)|) or
        u0 <= phi(x;0) + M at some node.
    """
    u, ux = datum.values(np.array([-1.0, 1.0]))
    for side, (value, slope) in (("-1", (u[0], -ux[0])), ("1", (u[1], ux[1]))):
        gap = abs(slope - value)
        if gap > COMPATIBILITY_TOL * (1.0 + abs(value)):
            raise IncompatibleDatumError(
                f"compatibility u0'(+-1) = +-u0(+-1) fails at x = {side}: |gap| = {gap:.3g}"
            )
    state = datum.state(grid)
    floor = stationary.floor(grid.x)
    margin = state.u - floor
    if np.any(margin <= 0):
        i = int(np.argmin(margin))
        raise IncompatibleDatumError(
            f"admissibility u0(x) > phi(x;0) + M fails at x = {grid.x[i]:.6g}: u0 - phi - M = {margin[i]:.3g}"
        )
    return state
