from dataclasses import dataclass, field

import numpy as np

from bandflow.errors import IncompatibleTracesError
from bandflow.utils import is_strictly_increasing
from bandflow.waves import WaveSolution

from .grid import Grid, GridState
from .operators import boundary_residual, derivatives, theta_of, wall_resolution

SERIES = ("t", "u_center", "u_left", "u_right", "max_abs_ux", "min_uxx", "wall_resolution")


@dataclass(eq=False)
class EvolveTrace:
    """
    Snapshots of an evolution together with per-step time series.
    """

    grid: Grid
    states: list[GridState] = field(default_factory=list)
    series: dict[str, list[float]] = field(default_factory=lambda: {name: [] for name in SERIES})
    meta: dict = field(default_factory=dict)
    horizon: dict | None = None

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.states])

    @property
    def t_last(self) -> float:
        return self.states[-1].t

    def __len__(self) -> int:
        return len(self.states)

    def add_snapshot(self, state: GridState) -> None:
        if self.states and not state.t > self.states[-1].t:
            raise ValueError(f"snapshot times must increase strictly, got t={state.t!r} after t={self.states[-1].t!r}")
        self.states.append(state)

    def record(self, state: GridState) -> None:
        """
        Append the centerline, boundary and slope values of a state to the series.
        """
        ux, uxx = derivatives(state.u, state.x)
        self.series["t"].append(state.t)
        self.series["u_center"].append(state.center_value())
        self.series["u_left"].append(float(state.u[0]))
        self.series["u_right"].append(float(state.u[-1]))
        self.series["max_abs_ux"].append(float(np.max(np.abs(ux))))
        self.series["min_uxx"].append(float(np.min(uxx[1:-1])))
        self.series["wall_resolution"].append(max(wall_resolution(state)))

    def matrix(self) -> np.ndarray:
        """Snapshot values stacked as rows."""
        return np.vstack([s.u for s in self.states])

    def series_array(self, name: str) -> np.ndarray:
        return np.asarray(self.series[name], dtype=float)

    def at(self, t: float, rtol: float = 1e-12) -> GridState:
        """
        The snapshot taken at time t.
        """
        times = self.times
        i = int(np.argmin(np.abs(times - t)))
        if abs(times[i] - t) > rtol * max(1.0, abs(t)):
            raise KeyError(f"no snapshot at t={t!r}")
        return self.states[i]

    def check_compatible(self, other: "EvolveTrace") -> None:
        """
        Raise IncompatibleTracesError unless both traces share grid and snapshot times.
        """
        if self.grid.x.shape != other.grid.x.shape or not np.array_equal(self.grid.x, other.grid.x):
            raise IncompatibleTracesError("traces live on different grids")
        if len(self) != len(other) or not np.allclose(self.times, other.times, rtol=1e-12, atol=1e-14):
            raise IncompatibleTracesError("traces have different snapshot times")

    def snapshot_rows(self) -> np.ndarray:
        """
        Rows t, x, u, ux, uxx, theta, one block per snapshot.
        """
        blocks = []
        for state in self.states:
            ux, uxx = derivatives(state.u, state.x)
            t = np.full_like(state.u, state.t)
            blocks.append(np.column_stack([t, state.x, state.u, ux, uxx, theta_of(state)]))
        return np.vstack(blocks)

    def to_summary(self) -> dict:
        residuals = [boundary_residual(s) for s in self.states]
        return {
            "grid": self.grid.describe(),
            "snapshot_times": self.times,
            "series": {name: self.series_array(name) for name in SERIES},
            "boundary_residual": {
                "left": [r[0] for r in residuals],
                "right": [r[1] for r in residuals],
            },
            "horizon": self.horizon,
            "meta": self.meta,
        }

    @classmethod
    def from_wave(cls, wave: WaveSolution, grid: Grid, times, shift: float = 0.0) -> "EvolveTrace":
        """
        The exact trace u(x, t) = Phi(x) + c t + shift sampled on a grid.

        Parameters
        ----------
        wave : WaveSolution
            The wave.
        grid : Grid
            The grid.
        times : array_like
            Strictly increasing snapshot times.
        shift : float, optional
            Vertical shift, by default 0.0

        Returns
        -------
        EvolveTrace
            Snapshots and series of the exact solution.
        """
        times = np.asarray(times, dtype=float)
        if not is_strictly_increasing(times):
            raise ValueError("snapshot times must increase strictly")
        phi, _ = wave.evaluate(grid.x)
        trace = cls(grid, meta={"datum": "wave", "c": wave.c, "shift": shift})
        for t in times:
            state = GridState(grid, np.asarray(phi) + wave.c * t + shift, float(t), {"datum": "wave"})
            trace.add_snapshot(state)
            trace.record(state)
        return trace
