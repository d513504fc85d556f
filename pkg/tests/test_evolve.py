import numpy as np
import pytest

from bandflow.constants import Scheme
from bandflow.errors import BlowUpError, InsufficientDataError, IncompatibleTracesError
from bandflow.flow import EvolveControls, EvolveTrace, Grid, GridState, domination_time, evolve, exponential_datum, make_rho


@pytest.fixture(scope="module")
def exp_state(constant_stationary, grid128):
    return exponential_datum(constant_stationary).state(grid128)


@pytest.fixture(scope="module")
def short_run(constant_pair, exp_state):
    return evolve(exp_state, constant_pair, 0.2, EvolveControls(snapshot_every=0.05))


def test_snapshot_times(short_run):
    """ test snapshots at multiples of snapshot_every """
    np.testing.assert_allclose(short_run.times, [0.0, 0.05, 0.1, 0.15, 0.2], atol=1e-12)
    assert short_run.meta["steps"] > 0
    assert short_run.meta["datum"] == "user-function"
    assert short_run.meta["scheme"] == "semi-implicit"
    assert short_run.horizon is None


def test_series_are_recorded(short_run):
    """ test that every accepted step is recorded """
    t = short_run.series_array("t")
    assert len(t) == short_run.meta["steps"] + 1
    assert np.all(np.diff(t) > 0)
    center = short_run.series_array("u_center")
    assert center[-1] == pytest.approx(short_run.states[-1].center_value())


def test_center_grows(short_run):
    """ test that the centerline rises for a datum above the stationary floor """
    center = short_run.series_array("u_center")
    assert np.all(np.diff(center) > 0)


def test_snapshot_rows(short_run):
    """ test the snapshot table layout """
    rows = short_run.snapshot_rows()
    assert rows.shape == (5 * 129, 6)
    np.testing.assert_allclose(rows[:129, 0], 0.0)
    np.testing.assert_allclose(rows[-1, 0], 0.2)


def test_summary(short_run):
    """ test the trace summary """
    summary = short_run.to_summary()
    assert set(summary) == {"grid", "snapshot_times", "series", "boundary_residual", "horizon", "meta"}
    assert len(summary["boundary_residual"]["left"]) == 5


def test_snapshot_lookup(short_run):
    """ test access by time """
    assert short_run.at(0.1).t == pytest.approx(0.1)
    with pytest.raises(KeyError):
        short_run.at(0.12)


def test_stop_when(constant_pair, exp_state):
    """ test that the predicate ends the run at a snapshot """
    level = exp_state.center_value() + 0.01
    trace = evolve(exp_state, constant_pair, 5.0, EvolveControls(snapshot_every=0.02), stop_when=lambda s: s.center_value() > level)
    assert trace.t_last < 1.0
    assert trace.states[-1].center_value() > level
    assert trace.states[-2].center_value() <= level


def test_slope_horizon(constant_pair, exp_state):
    """ test that a slope above the cap ends the run with a notice """
    trace = evolve(exp_state, constant_pair, 1.0, EvolveControls(slope_cap=1.0))
    assert trace.horizon is not None
    assert trace.horizon["reason"] == "slope"
    assert trace.horizon["slope_cap"] == 1.0
    assert trace.horizon["edge_slope"] > 1.0
    assert trace.t_last < 1.0


def test_resolution_horizon(constant_pair, constant_wave, constant_stationary, grid128):
    """ test that a rho run on a coarse uniform grid stops once the boundary layer is under-resolved """
    rho = make_rho(constant_pair, constant_stationary.threshold + 1.0, constant_wave, constant_stationary)
    trace = evolve(rho.state(grid128), constant_pair, 40.0, EvolveControls(snapshot_every=0.5))
    assert trace.horizon is not None
    assert trace.horizon["reason"] == "resolution"
    assert trace.horizon["wall_resolution"] > trace.horizon["resolution_cap"]
    assert trace.t_last < 20.0
    resolution = trace.series_array("wall_resolution")
    assert np.all(resolution[:-1] <= trace.horizon["resolution_cap"])
    # the centerline still moves at a sizable fraction of c_bar up to the horizon
    center = trace.series_array("u_center")
    t = trace.series_array("t")
    late = t >= 0.5 * t[-1]
    assert np.polyfit(t[late], center[late], 1)[0] > 0.5 * constant_wave.c


def test_fixed_explicit_step_blows_up(constant_pair, exp_state):
    """ test that a fixed explicit step above the bound is a blow-up """
    controls = EvolveControls(scheme=Scheme.EXPLICIT, dt=1e-2, adaptive=False)
    with pytest.raises(BlowUpError) as info:
        evolve(exp_state, constant_pair, 0.1, controls)
    assert info.value.state.t == 0.0


def test_adaptive_explicit_steps_are_clipped(constant_pair, exp_state):
    """ test that the adaptive explicit run respects the stability bound """
    trace = evolve(exp_state, constant_pair, 0.02, EvolveControls(scheme=Scheme.EXPLICIT, dt=1e-2))
    assert trace.t_last == pytest.approx(0.02)
    assert trace.meta["steps"] > 100


def test_controls_validation():
    """ test invalid step and snapshot controls """
    with pytest.raises(ValueError):
        EvolveControls(dt=1e-12)
    with pytest.raises(ValueError):
        EvolveControls(snapshot_every=0.0)
    with pytest.raises(ValueError):
        EvolveControls(scheme="crank-nicolson")


def test_non_finite_initial_state(constant_pair, grid128):
    """ test that a non-finite initial state is rejected """
    u = np.ones(129)
    u[3] = np.nan
    with pytest.raises(ValueError):
        evolve(GridState(grid128, u), constant_pair, 0.1)


def test_domination_time(constant_pair, constant_wave, constant_stationary, grid128):
    """ test the first time the rho solution lies above a datum """
    rho_state = make_rho(constant_pair, constant_stationary.threshold + 1.0, constant_wave, constant_stationary).state(grid128)
    T, _ = domination_time(rho_state, rho_state.u - 1.0, constant_pair)
    assert T == 0.0
    T, trace = domination_time(rho_state, rho_state.u + 0.05, constant_pair, EvolveControls(snapshot_every=0.01), t_max=5.0)
    assert 0 < T < 5.0
    assert np.all(trace.states[-1].u > rho_state.u + 0.05)
    with pytest.raises(InsufficientDataError):
        domination_time(rho_state, rho_state.u + 100.0, constant_pair, t_max=0.1)


def test_wave_trace(constant_wave, grid128):
    """ test the exact trace of a traveling wave """
    trace = EvolveTrace.from_wave(constant_wave, grid128, [0.0, 0.5, 1.0], shift=0.3)
    assert trace.meta["datum"] == "wave"
    assert trace.states[2].center_value() == pytest.approx(constant_wave.c + 0.3, abs=1e-6)
    with pytest.raises(ValueError):
        EvolveTrace.from_wave(constant_wave, grid128, [0.0, 0.0])


def test_incompatible_traces(constant_wave, grid128):
    """ test traces on different grids and times """
    a = EvolveTrace.from_wave(constant_wave, grid128, [0.0, 1.0])
    b = EvolveTrace.from_wave(constant_wave, Grid.uniform(64), [0.0, 1.0])
    c = EvolveTrace.from_wave(constant_wave, grid128, [0.0, 2.0])
    with pytest.raises(IncompatibleTracesError):
        a.check_compatible(b)
    with pytest.raises(IncompatibleTracesError):
        a.check_compatible(c)
    with pytest.raises(ValueError):
        a.add_snapshot(a.states[0])
