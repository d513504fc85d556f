import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from bandflow.coefficients import CoefficientPair
from bandflow.constants import CFL, RESOLUTION_CAP, SLOPE_CAP, Scheme
from bandflow.errors import BlowUpError, InsufficientDataError

from .grid import GridState
from .operators import derivatives, wall_resolution
from .steppers import make_stepper
from .trace import EvolveTrace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvolveControls:
    dt: float = 1e-3
    dt_min: float = 1e-10
    dt_max: float = 1e-2
    adaptive: bool = True
    du_tol: float = 0.05
    snapshot_every: float = 0.05
    slope_cap: float = SLOPE_CAP
    resolution_cap: float = RESOLUTION_CAP
    scheme: Scheme = Scheme.SEMI_IMPLICIT
    max_steps: int = 10_000_000
    cfl: float = CFL

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if not (0 < self.dt_min <= self.dt and self.dt_min <= self.dt_max):
            raise ValueError("time steps need 0 < dt_min <= dt and dt_min <= dt_max")
        if not self.snapshot_every > 0:
            raise ValueError(f"snapshot_every must be positive, got {self.snapshot_every!r}")
        if not (self.slope_cap > 0 and self.resolution_cap > 0):
            raise ValueError("slope_cap and resolution_cap must be positive")


def _edge_slope(state: GridState) -> float:
    """max |u_x| over the two nodes next to each end."""
    ux, _ = derivatives(state.u, state.x)
    return float(np.max(np.abs(ux[[1, 2, -3, -2]])))


def evolve(
    state: GridState,
    pair: CoefficientPair,
    t_end: float,
    controls: EvolveControls | None = None,
    stop_when: Callable[[GridState], bool] | None = None,
) -> EvolveTrace:
    """
    Integrate the band flow from `state` up to `t_end`.

    Snapshots are taken at state.t + k snapshot_every (and at t_end); steps
    are clipped to land on them. With `adaptive` the step halves on rejection
    (non-finite values or max |du| > du_tol) and grows by 1.2 on success.

    Parameters
    ----------
    state : GridState
        Initial state.
    pair : CoefficientPair
        The coefficients.
    t_end : float
        Final time.
    controls : EvolveControls, optional
        Step and snapshot controls, by default EvolveControls()
    stop_when : Callable[[GridState], bool], optional
        Predicate evaluated on every snapshot; the run ends at the first
        snapshot where it holds, by default None

    Returns
    -------
    EvolveTrace
        Snapshots and series; `horizon` is set when the slope next to an end
        exceeded `slope_cap` or the wall resolution exceeded `resolution_cap`.

    Raises
    ------
    BlowUpError
        If a step fails below dt_min (adaptive) or at all (fixed step).
    """
    controls = controls or EvolveControls()
    if not state.is_finite:
        raise ValueError("initial state has non-finite values")
    stepper = make_stepper(pair, controls.scheme, controls.cfl)
    t0 = state.t
    trace = EvolveTrace(
        state.grid,
        meta={"scheme": controls.scheme.value, "datum": state.meta.get("datum"), "t0": t0},
    )
    trace.add_snapshot(state)
    trace.record(state)
    if stop_when is not None and stop_when(state):
        return trace

    dt = controls.dt
    k_snap = 1
    steps = 0
    rejected = 0
    while state.t < t_end:
        target = min(t0 + k_snap * controls.snapshot_every, t_end)
        remaining = target - state.t
        dt_try = min(dt, controls.dt_max) if controls.adaptive else dt
        if controls.adaptive:
            dt_try = min(dt_try, stepper.stable_dt(state))
        landing = remaining <= dt_try * (1 + 1e-9)
        if landing:
            dt_try = remaining
        try:
            new = stepper.step(state, dt_try)
            if controls.adaptive and np.max(np.abs(new.u - state.u)) > controls.du_tol:
                raise BlowUpError("step change above du_tol", state, state.t)
        except BlowUpError as err:
            if not controls.adaptive:
                raise
            dt = 0.5 * dt_try
            rejected += 1
            if dt < controls.dt_min:
                raise BlowUpError(f"step size fell below dt_min ({err})", state, state.t) from err
            continue

        if landing:
            new.t = target
        state = new
        steps += 1
        trace.record(state)
        if controls.adaptive:
            dt = min(1.2 * dt_try if not landing else dt, controls.dt_max)

        snapshot = landing
        if snapshot:
            trace.add_snapshot(state)
            if math.isclose(target, t0 + k_snap * controls.snapshot_every):
                k_snap += 1
        slope = _edge_slope(state)
        resolution = max(wall_resolution(state))
        if slope > controls.slope_cap or resolution > controls.resolution_cap:
            reason = "slope" if slope > controls.slope_cap else "resolution"
            trace.horizon = {
                "t": state.t,
                "reason": reason,
                "edge_slope": slope,
                "slope_cap": controls.slope_cap,
                "wall_resolution": resolution,
                "resolution_cap": controls.resolution_cap,
            }
            logger.warning(
                "%s horizon reached at t=%.6g (edge slope %.3g, wall resolution %.3g)", reason, state.t, slope, resolution
            )
            if not snapshot:
                trace.add_snapshot(state)
            break
        if snapshot and stop_when is not None and stop_when(state):
            break
        if steps >= controls.max_steps:
            logger.warning("stopped after max_steps=%d at t=%.6g", controls.max_steps, state.t)
            if not snapshot:
                trace.add_snapshot(state)
            break

    trace.meta.update({"steps": steps, "rejected": rejected, "t_end": state.t})
    logger.info("evolved to t=%.6g in %d steps (%d rejected), %d snapshots", state.t, steps, rejected, len(trace))
    return trace


def domination_time(
    rho_state: GridState,
    u0_values: np.ndarray,
    pair: CoefficientPair,
    controls: EvolveControls | None = None,
    t_max: float = 50.0,
) -> tuple[float, EvolveTrace]:
    """
    Evolve rho until its solution first dominates u0 at every node.

    Parameters
    ----------
    rho_state : GridState
        The state built from rho.
    u0_values : np.ndarray
        Nodal values of the datum to dominate.
    pair : CoefficientPair
        The coefficients.
    controls : EvolveControls, optional
        Controls of the rho run, by default EvolveControls()
    t_max : float, optional
        Time limit, by default 50.0

    Returns
    -------
    tuple[float, EvolveTrace]
        The first snapshot time T with u(x, T; rho) > u0(x), and the rho trace.

    Raises
    ------
    InsufficientDataError
        If domination is not reached before t_max or the slope horizon.
    """
    u0_values = np.asarray(u0_values, dtype=float)
    trace = evolve(rho_state, pair, t_max, controls, stop_when=lambda s: bool(np.all(s.u > u0_values)))
    last = trace.states[-1]
    if not np.all(last.u > u0_values):
        raise InsufficientDataError(f"rho does not dominate u0 by t={last.t:.6g}")
    logger.info("domination time T = %.6g", last.t)
    return last.t, trace
