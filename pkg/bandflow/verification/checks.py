"""
Quantitative checks of evolution traces against the properties of the band
flow: the linear growth wedge, convexity, the gradient envelopes given by the
traveling waves, the interior gradient bound, convergence to the wave and the
comparison principle.

Every check returns a CheckResult. A check whose hypotheses are not met by
its inputs returns CheckStatus.NOT_APPLICABLE instead of failing.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from bandflow.coefficients import CoefficientPair
from bandflow.constants import EPSILON, CheckStatus, DatumKind
from bandflow.core.finite_differences import interior_derivatives
from bandflow.errors import DependencyError, IncompatibleTracesError, InsufficientDataError
from bandflow.flow import EvolveTrace, boundary_residual, theta_of, theta_rhs
from bandflow.flow.operators import derivatives
from bandflow.waves import StationaryProfile, WaveSolution

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    status: CheckStatus
    measured: dict = field(default_factory=dict)
    tolerance: float | None = None
    window: dict = field(default_factory=dict)
    note: str = ""

    @property
    def failed(self) -> bool:
        return self.status == CheckStatus.FAIL

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status.value,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "window": self.window,
            "note": self.note,
        }


def _status(ok: bool) -> CheckStatus:
    return CheckStatus.PASS if ok else CheckStatus.FAIL


def _require_snapshots(trace: EvolveTrace, count: int = 3) -> None:
    if len(trace) < count:
        raise InsufficientDataError(f"need at least {count} snapshots, trace has {len(trace)}")


def _late_slope(t: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of y(t) over the second half of the time range."""
    late = t >= t[0] + 0.5 * (t[-1] - t[0])
    if np.count_nonzero(late) < 2:
        late = np.ones_like(t, dtype=bool)
    return float(np.polyfit(t[late], y[late], 1)[0])


def _datum_kind(trace: EvolveTrace) -> str | None:
    return trace.meta.get("datum")


def check_linfty_wedge(
    trace: EvolveTrace,
    wave: WaveSolution,
    rel_tol: float = 0.05,
    stationary: StationaryProfile | None = None,
    epsilon: float = EPSILON,
) -> CheckResult:
    """
    Fit the wedge c0 t - C1 <= u(0, t) <= c_bar t + C2.

    C2 is the least constant of the upper line; c0 is the least-squares growth
    rate of the centerline over the second half of the run and C1 the least
    constant putting c0 t - C1 below it. The check fails when the late growth
    exceeds c_bar (1 + rel_tol), which makes C2 unbounded in time, or when
    c0 <= 0.

    Parameters
    ----------
    trace : EvolveTrace
        Trace of an admissible datum.
    wave : WaveSolution
        The wave with speed c_bar.
    rel_tol : float, optional
        Relative slack on the late growth rate, by default 0.05
    stationary : StationaryProfile, optional
        When given, the lift M + epsilon of the lower solution
        phi(x;c0) + M + epsilon + c0 t is reported.
    epsilon : float, optional
        Lift of the lower solution, by default 0.1

    Returns
    -------
    CheckResult
        Measured c0, C1, C2 and the band-wide C2.
    """
    _require_snapshots(trace)
    t = trace.times
    center = np.array([s.center_value() for s in trace.states])
    c_bar = wave.c
    C2 = float(np.max(center - c_bar * t))
    C2_band = float(np.max(trace.matrix().max(axis=1) - c_bar * t))
    upper_rate = _late_slope(t, trace.matrix().max(axis=1))
    c0 = _late_slope(t, center)
    C1 = float(np.max(c0 * t - center))
    measured = {"c_bar": c_bar, "c0": c0, "C1": C1, "C2": C2, "C2_band": C2_band, "upper_rate": upper_rate}
    if stationary is not None:
        measured["lower_solution_lift"] = stationary.M + epsilon
    upper_ok = upper_rate <= c_bar * (1.0 + rel_tol)
    ok = upper_ok and c0 > 0
    note = "" if ok else ("growth above c_bar" if not upper_ok else "no positive lower growth rate")
    return CheckResult(
        "linfty_wedge",
        _status(ok),
        measured,
        rel_tol,
        {"t": [float(t[0]), float(t[-1])], "x": "center"},
        note,
    )


def check_convexity(trace: EvolveTrace, rel_tol: float = 1e-6) -> CheckResult:
    """
    min over snapshots and interior nodes of u_xx > -rel_tol max |u_xx|.
    Claimed only for data built from rho and for exact waves.
    """
    window = {"t": [float(trace.times[0]), float(trace.times[-1])], "x": "interior"}
    if _datum_kind(trace) not in (DatumKind.RHO.value, DatumKind.WAVE.value):
        return CheckResult(
            "convexity",
            CheckStatus.NOT_APPLICABLE,
            window=window,
            note=f"convexity is claimed for rho data only, datum is {_datum_kind(trace)}",
        )
    min_uxx = np.inf
    max_abs = 0.0
    for state in trace.states:
        _, uxx = interior_derivatives(state.u, state.x)
        min_uxx = min(min_uxx, float(uxx.min()))
        max_abs = max(max_abs, float(np.abs(uxx).max()))
    tol = rel_tol * max_abs
    return CheckResult("convexity", _status(min_uxx > -tol), {"min_uxx": min_uxx, "max_abs_uxx": max_abs}, tol, window)


def _slope_profile(wave: WaveSolution, x: np.ndarray) -> np.ndarray:
    _, psi = wave.evaluate(x)
    return np.asarray(psi)


def slope_truncation(
    fine: EvolveTrace,
    coarse: EvolveTrace,
    half_width: float = 0.95,
    order: int = 2,
    safety: float = 2.0,
) -> float:
    """
    Richardson estimate of the slope error of `fine` from a run of the same
    datum on every other node of its grid.

    Parameters
    ----------
    fine : EvolveTrace
        The trace to estimate.
    coarse : EvolveTrace
        Same datum and snapshot cadence on the grid fine.grid.x[::2].
    half_width : float, optional
        Coarse nodes with |x| <= half_width are compared, by default 0.95
    order : int, optional
        Convergence order of the slopes, by default 2
    safety : float, optional
        Factor on the estimate, by default 2.0

    Returns
    -------
    float
        safety max |u_x^fine - u_x^coarse| / (2^order - 1) over the snapshots
        both traces reached.

    Raises
    ------
    IncompatibleTracesError
        If the grids are not nested or the snapshot times differ.
    """
    xf, xc = fine.grid.x, coarse.grid.x
    if len(xf) != 2 * len(xc) - 1 or not np.allclose(xf[::2], xc, rtol=0, atol=1e-12):
        raise IncompatibleTracesError("the coarse grid must hold every other node of the fine grid")
    count = min(len(fine), len(coarse))
    if not np.allclose(fine.times[:count], coarse.times[:count], rtol=1e-12, atol=1e-14):
        raise IncompatibleTracesError("traces have different snapshot times")
    mask = coarse.grid.window(half_width)
    worst = 0.0
    for a, b in zip(fine.states[:count], coarse.states[:count]):
        ux_fine, _ = derivatives(a.u, xf)
        ux_coarse, _ = derivatives(b.u, xc)
        worst = max(worst, float(np.max(np.abs(ux_fine[::2][mask] - ux_coarse[mask]))))
    return safety * worst / (2**order - 1)


def check_gradient_envelopes(
    trace: EvolveTrace,
    wave_bar: WaveSolution | None,
    wave_h0: WaveSolution | None,
    half_width: float = 0.95,
    disc_slack: float = 0.0,
    abs_slack: float = 1e-8,
) -> CheckResult:
    """
    Upper envelope 0 < u_x < Phi'(x) on (0, 1), mirrored on (-1, 0), at every
    snapshot; lower envelope Phi'(x;h0) < u_x from a measured onset time on.

    Parameters
    ----------
    trace : EvolveTrace
        Trace of a rho datum.
    wave_bar : WaveSolution
        The wave with infinite boundary slopes.
    wave_h0 : WaveSolution
        The wave with boundary slope h0.
    half_width : float, optional
        Nodes with |x| <= half_width are checked, by default 0.95
    disc_slack : float, optional
        Estimated slope error of the trace, see `slope_truncation`, added
        to both sides of the strict inequalities, by default 0.0
    abs_slack : float, optional
        Round-off slack, by default 1e-8

    Returns
    -------
    CheckResult
        Worst margins, the center slope and the onset time of the lower envelope.

    Raises
    ------
    DependencyError
        If one of the waves is missing.
    """
    window = {"t": [float(trace.times[0]), float(trace.times[-1])], "x": [-half_width, half_width]}
    if _datum_kind(trace) != DatumKind.RHO.value:
        return CheckResult(
            "gradient_envelopes",
            CheckStatus.NOT_APPLICABLE,
            window=window,
            note=f"envelopes are claimed for rho data only, datum is {_datum_kind(trace)}",
        )
    if wave_bar is None or wave_h0 is None:
        raise DependencyError("gradient_envelopes needs the waves for h = inf and h = h0")
    x = trace.grid.x
    mask = trace.grid.window(half_width) & (np.abs(x) > 1e-14)
    xs = x[mask]
    sign = np.sign(xs)
    upper = np.abs(_slope_profile(wave_bar, xs))
    lower = np.abs(_slope_profile(wave_h0, xs))

    upper_ok = True
    worst_upper = np.inf
    lower_holds = []
    worst_lower = []
    center_slope = 0.0
    ic = trace.grid.center_index()
    for state in trace.states:
        ux, _ = derivatives(state.u, x)
        center_slope = max(center_slope, abs(float(ux[ic])))
        s = sign * ux[mask]
        slack = disc_slack + abs_slack
        margin_up = upper + slack - s
        positive = s > -slack
        upper_ok &= bool(np.all(margin_up > 0) and np.all(positive))
        worst_upper = min(worst_upper, float(np.min(np.minimum(margin_up, s + slack))))
        margin_low = s - lower + slack
        lower_holds.append(bool(np.all(margin_low > 0)))
        worst_lower.append(float(np.min(margin_low)))

    onset = None
    for k in range(len(lower_holds)):
        if all(lower_holds[k:]):
            onset = k
            break
    measured = {
        "h0": wave_h0.h,
        "worst_upper_margin": worst_upper,
        "center_slope": center_slope,
        "onset_time": None if onset is None else float(trace.times[onset]),
        "worst_lower_margin_after_onset": None if onset is None else min(worst_lower[onset:]),
        "disc_slack": disc_slack,
    }
    ok = upper_ok and onset is not None
    note = "" if ok else ("upper envelope violated" if not upper_ok else "lower envelope never settles")
    return CheckResult("gradient_envelopes", _status(ok), measured, disc_slack + abs_slack, window, note)


def _band_min_slopes(ux: np.ndarray, x: np.ndarray, epsilon: float) -> float:
    """Larger of the two band minima of |u_x| over 1 - 2 eps <= |x| <= 1 - eps."""
    band = (np.abs(x) >= 1 - 2 * epsilon - 1e-14) & (np.abs(x) <= 1 - epsilon + 1e-14)
    right = band & (x > 0)
    left = band & (x < 0)
    if not (np.any(right) and np.any(left)):
        return float("nan")
    return float(max(np.min(np.abs(ux[right])), np.min(np.abs(ux[left]))))


def check_interior_gradient(
    trace: EvolveTrace,
    wave: WaveSolution | None,
    domination_time: float | None,
    epsilon: float = EPSILON,
    disc_slack: float = 0.0,
) -> CheckResult:
    """
    With M2 = (Phi(1 - eps) + c_bar T) / eps, check that the band minimum of
    |u_x| over 1 - 2 eps <= |x| <= 1 - eps stays below M2 at every snapshot
    and that max over |x| <= 1 - 2 eps of |u_x| stays below
    max(M2, that maximum at T_eps) after T_eps, the first snapshot from which
    the band bound holds throughout.

    Parameters
    ----------
    trace : EvolveTrace
        Trace of an admissible datum.
    wave : WaveSolution
        The wave with infinite boundary slopes.
    domination_time : float
        The time T at which the rho solution dominates the datum.
    epsilon : float, optional
        Band width, by default 0.1
    disc_slack : float, optional
        Estimated slope error of the trace, see `slope_truncation`, added
        to the bounds, by default 0.0

    Returns
    -------
    CheckResult
        M2, T_eps and the measured M3.

    Raises
    ------
    DependencyError
        If the wave or the domination time is missing.
    """
    if wave is None or domination_time is None:
        raise DependencyError("interior_gradient needs the wave and the rho companion domination time")
    x = trace.grid.x
    window = {"t": [float(trace.times[0]), float(trace.times[-1])], "x": [-(1 - 2 * epsilon), 1 - 2 * epsilon]}
    phi_band, _ = wave.evaluate(1.0 - epsilon)
    M2 = (phi_band + wave.c * domination_time) / epsilon
    inner = trace.grid.window(1 - 2 * epsilon)
    band_mins = []
    inner_max = []
    for state in trace.states:
        ux, _ = derivatives(state.u, x)
        band_mins.append(_band_min_slopes(ux, x, epsilon))
        inner_max.append(float(np.max(np.abs(ux[inner]))))
    measured = {"M2": M2, "T": domination_time, "max_band_min": max(band_mins), "disc_slack": disc_slack}
    if not np.isfinite(band_mins[0]) or band_mins[0] > M2:
        return CheckResult(
            "interior_gradient",
            CheckStatus.NOT_APPLICABLE,
            measured,
            disc_slack,
            window,
            "hypothesis window: the band minimum exceeds M2 at t = 0 or the band holds no node, enlarge epsilon",
        )
    holds = [m <= M2 + disc_slack for m in band_mins]
    k_eps = next((k for k in range(len(holds)) if all(holds[k:])), None)
    if k_eps is None:
        return CheckResult("interior_gradient", CheckStatus.FAIL, measured, disc_slack, window, "band bound violated")
    M3 = max(inner_max[k_eps:])
    bound = max(M2, inner_max[k_eps])
    measured.update({"T_eps": float(trace.times[k_eps]), "M3": M3, "M3_bound": bound})
    ok = all(holds) and M3 <= bound + disc_slack
    return CheckResult("interior_gradient", _status(ok), measured, disc_slack, window)


def check_convergence(
    trace: EvolveTrace,
    wave: WaveSolution,
    epsilon: float = EPSILON,
    s0: float | None = None,
    t_max: float | None = None,
    rel_tol: float = 0.05,
    speed_tol: float = 0.02,
    rung_slack: float = 0.05,
) -> CheckResult:
    """
    Convergence of u(x, t + s) - u(0, s) to Phi(x) - Phi(0) + c_bar t.

    For every s of the ladder s0 2^k with s + t_max inside the run,
    E(s) = max over |x| <= 1 - 2 eps and snapshot times t' in [s, s + t_max] of
    |u(x, t') - u(0, s) - (Phi(x) - Phi(0)) - c_bar (t' - s)|.

    Parameters
    ----------
    trace : EvolveTrace
        The trace.
    wave : WaveSolution
        The wave with infinite boundary slopes.
    epsilon : float, optional
        Window |x| <= 1 - 2 eps, by default 0.1
    s0 : float, optional
        First reference time, by default a fifth of the run
    t_max : float, optional
        Length of the comparison window, by default a fifth of the run, so
        that the ladder s0, 2 s0, 4 s0 ends at the last snapshot
    rel_tol : float, optional
        Final E must be below rel_tol (Phi(1 - 2 eps) - Phi(0)), by default 0.05
    speed_tol : float, optional
        Relative tolerance of the centerline speed against c_bar, by default 0.02
    rung_slack : float, optional
        Allowed relative increase of E on at most one rung, by default 0.05

    Returns
    -------
    CheckResult
        E along the ladder and the fitted speed; PARTIAL with fewer than three
        rungs.
    """
    _require_snapshots(trace)
    t = trace.times
    t0, t_last = float(t[0]), float(t[-1])
    span = t_last - t0
    s0 = s0 if s0 is not None else span / 5
    t_max = t_max if t_max is not None else span / 5
    x = trace.grid.x
    mask = trace.grid.window(1 - 2 * epsilon)
    phi_nodes, _ = wave.evaluate(x)
    phi_rel = np.asarray(phi_nodes) - np.interp(0.0, x, phi_nodes)

    ladder = []
    s = s0
    while t0 + s + t_max <= t_last * (1 + 1e-12):
        ladder.append(s)
        s *= 2
    errors = []
    for s in ladder:
        k = int(np.searchsorted(t, t0 + s - 1e-12 * max(1.0, t_last)))
        ref = trace.states[k]
        u_ref = ref.center_value()
        worst = 0.0
        for state in trace.states[k:]:
            if state.t > ref.t + t_max * (1 + 1e-12):
                break
            diff = state.u - u_ref - phi_rel - wave.c * (state.t - ref.t)
            worst = max(worst, float(np.max(np.abs(diff[mask]))))
        errors.append(worst)

    center = trace.series_array("u_center")
    speed = _late_slope(trace.series_array("t"), center)
    phi_edge, _ = wave.evaluate(1 - 2 * epsilon)
    tol = rel_tol * (phi_edge - np.interp(0.0, x, phi_nodes))
    measured = {"ladder": ladder, "E": errors, "speed": speed, "c_bar": wave.c}
    window = {"t_max": t_max, "x": [-(1 - 2 * epsilon), 1 - 2 * epsilon]}
    if len(errors) < 3:
        return CheckResult(
            "convergence", CheckStatus.PARTIAL, measured, tol, window, f"only {len(errors)} ladder rungs fit the run"
        )
    # differences at round-off level are not rises
    noise = 1e-10 * max(1.0, float(np.max(np.abs(trace.matrix()))))
    rises = [e1 > e0 + noise for e0, e1 in zip(errors, errors[1:])]
    big_rise = any(e1 > e0 * (1 + rung_slack) + noise for e0, e1 in zip(errors, errors[1:]))
    decreasing = sum(rises) <= 1 and not big_rise
    speed_ok = abs(speed - wave.c) <= speed_tol * wave.c
    ok = decreasing and errors[-1] < tol and speed_ok
    notes = []
    if not decreasing:
        notes.append("E does not decrease along the ladder")
    if errors[-1] >= tol:
        notes.append("final E above tolerance")
    if not speed_ok:
        notes.append("centerline speed off c_bar")
    return CheckResult("convergence", _status(ok), measured, tol, window, "; ".join(notes))


def check_comparison(trace_a: EvolveTrace, trace_b: EvolveTrace) -> CheckResult:
    """
    Strict nodewise ordering of two traces at every shared snapshot, given the
    ordering at the first one.

    Raises
    ------
    IncompatibleTracesError
        If the traces differ in grid or snapshot times.
    """
    trace_a.check_compatible(trace_b)
    gaps = trace_b.matrix() - trace_a.matrix()
    window = {"t": [float(trace_a.times[0]), float(trace_a.times[-1])], "x": "all"}
    if np.all(gaps[0] < 0):
        gaps = -gaps
    elif not np.all(gaps[0] > 0):
        return CheckResult("comparison", CheckStatus.NOT_APPLICABLE, window=window, note="hypothesis not met at t=0")
    min_gap = gaps.min(axis=1)
    measured = {"min_gap": float(min_gap.min()), "initial_min_gap": float(min_gap[0])}
    return CheckResult("comparison", _status(bool(np.all(min_gap > 0))), measured, 0.0, window)


def check_gradient_bound(trace: EvolveTrace) -> CheckResult:
    """
    max |u_x| is finite on every snapshot up to the end of the run.
    """
    values = [float(np.max(np.abs(derivatives(s.u, s.x)[0]))) for s in trace.states]
    ok = bool(np.all(np.isfinite(values)))
    window = {"t": [float(trace.times[0]), float(trace.times[-1])], "x": "all"}
    measured = {"C3": max(values), "horizon": trace.horizon}
    return CheckResult("gradient_bound", _status(ok), measured, None, window)


def check_theta_equation(
    trace: EvolveTrace,
    pair: CoefficientPair,
    epsilon: float = EPSILON,
    tolerance: float = 0.05,
) -> CheckResult:
    """
    Residual of the angle equation between consecutive snapshots, by the
    trapezoidal rule in time, relative to 1 + max |theta_t|; and the end
    values theta(+-1) against +-arctan u(+-1).
    """
    _require_snapshots(trace, 2)
    x = trace.grid.x
    inner = trace.grid.window(1 - 2 * epsilon)[1:-1]
    thetas = [theta_of(s) for s in trace.states]
    rates = [theta_rhs(th, x, pair) for th in thetas]
    worst = 0.0
    scale = 1.0
    for k in range(len(thetas) - 1):
        dt = trace.states[k + 1].t - trace.states[k].t
        lhs = (thetas[k + 1][1:-1] - thetas[k][1:-1]) / dt
        avg = 0.5 * (rates[k] + rates[k + 1])
        worst = max(worst, float(np.max(np.abs(lhs - avg)[inner])))
        scale = max(scale, 1.0 + float(np.max(np.abs(avg[inner]))))
    boundary_gap = 0.0
    for state, th in zip(trace.states, thetas):
        gap = max(abs(th[0] + np.arctan(state.u[0])), abs(th[-1] - np.arctan(state.u[-1])))
        boundary_gap = max(boundary_gap, float(gap))
    residual = worst / scale
    max_robin = max(max(abs(r) for r in boundary_residual(s)) for s in trace.states)
    measured = {"relative_residual": residual, "boundary_theta_gap": boundary_gap, "boundary_residual": max_robin}
    ok = bool(np.isfinite(residual)) and residual < tolerance and boundary_gap <= max_robin + 1e-12
    window = {"t": [float(trace.times[0]), float(trace.times[-1])], "x": [-(1 - 2 * epsilon), 1 - 2 * epsilon]}
    return CheckResult("theta_equation", _status(ok), measured, tolerance, window)


def check_speed(trace: EvolveTrace, wave: WaveSolution, rel_tol: float = 0.02) -> CheckResult:
    """
    Least-squares centerline speed over the second half of the run against c_bar.
    """
    t = trace.series_array("t")
    if len(t) < 3:
        raise InsufficientDataError(f"need at least 3 recorded steps, trace has {len(t)}")
    speed = _late_slope(t, trace.series_array("u_center"))
    ok = abs(speed - wave.c) <= rel_tol * wave.c
    window = {"t": [float(t[0] + 0.5 * (t[-1] - t[0])), float(t[-1])], "x": "center"}
    return CheckResult("speed", _status(ok), {"speed": speed, "c_bar": wave.c}, rel_tol, window)
