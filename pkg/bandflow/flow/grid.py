from dataclasses import dataclass, field

import numpy as np

from bandflow.utils import is_strictly_increasing

MIN_INTERVALS = 64


@dataclass(frozen=True, eq=False)
class Grid:
    """
    Nodes -1 = x_0 < x_1 < ... < x_N = 1 of the band.
    """

    x: np.ndarray
    symmetric: bool = False

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        object.__setattr__(self, "x", x)
        if x.ndim != 1 or len(x) - 1 < MIN_INTERVALS:
            raise ValueError(f"a grid needs at least {MIN_INTERVALS} intervals, got {len(x) - 1}")
        if x[0] != -1.0 or x[-1] != 1.0 or not is_strictly_increasing(x):
            raise ValueError("grid nodes must increase strictly from -1 to 1")
        if self.symmetric and not self.is_symmetric:
            raise ValueError("grid flagged symmetric is not symmetric about 0")

    @classmethod
    def uniform(cls, n: int) -> "Grid":
        """
        Uniform grid with n intervals.
        """
        return cls(_symmetrized(np.linspace(-1.0, 1.0, n + 1)), symmetric=True)

    @classmethod
    def clustered(cls, n: int, strength: float = 1.0) -> "Grid":
        """
        Grid with n intervals refined towards x = +-1 by the blended sine map
        x = (1 - strength) s + strength sin(pi s / 2) of a uniform s. At full
        strength the end spacing is 1 - cos(pi / n), about 5 / n^2.

        Parameters
        ----------
        n : int
            Number of intervals.
        strength : float, optional
            Weight of the sine map in [0, 1], by default 1.0

        Returns
        -------
        Grid
            A symmetric grid.
        """
        if not 0 <= strength <= 1:
            raise ValueError(f"clustering strength must lie in [0, 1], got {strength!r}")
        s = np.linspace(-1.0, 1.0, n + 1)
        x = (1 - strength) * s + strength * np.sin(np.pi * s / 2)
        return cls(_symmetrized(x), symmetric=True)

    @property
    def n(self) -> int:
        """Number of intervals."""
        return len(self.x) - 1

    @property
    def dx(self) -> np.ndarray:
        return np.diff(self.x)

    @property
    def min_dx(self) -> float:
        return float(self.dx.min())

    @property
    def is_symmetric(self) -> bool:
        return bool(np.allclose(self.x, -self.x[::-1], rtol=0, atol=1e-14))

    def center_index(self) -> int:
        """Index of the node closest to x = 0."""
        return int(np.argmin(np.abs(self.x)))

    def window(self, half_width: float) -> np.ndarray:
        """Boolean mask of the nodes with |x| <= half_width."""
        return np.abs(self.x) <= half_width + 1e-14

    def describe(self) -> dict:
        return {"n": self.n, "symmetric": self.symmetric, "min_dx": self.min_dx}


@dataclass(eq=False)
class GridState:
    grid: Grid
    u: np.ndarray
    t: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        if self.u.shape != self.grid.x.shape:
            raise ValueError(f"state has {self.u.size} values for {self.grid.x.size} nodes")
        if self.t < 0:
            raise ValueError(f"time must be non-negative, got t={self.t!r}")

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @property
    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.u)))

    def center_value(self) -> float:
        """u(0) interpolated linearly when 0 is not a node."""
        return float(np.interp(0.0, self.grid.x, self.u))

    def replace(self, u: np.ndarray, t: float) -> "GridState":
        return GridState(self.grid, u, t, dict(self.meta))

    def copy(self) -> "GridState":
        return GridState(self.grid, self.u.copy(), self.t, dict(self.meta))


def _symmetrized(x: np.ndarray) -> np.ndarray:
    x = 0.5 * (x - x[::-1])
    x[0], x[-1] = -1.0, 1.0
    return x
