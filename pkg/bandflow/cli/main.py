import argparse
import logging
import math
import sys
from dataclasses import replace

import numpy as np

from bandflow.coefficients import CoefficientPair, Requirement, validate
from bandflow.constants import ExitCode, Scheme
from bandflow.errors import (
    BlowUpError,
    CoefficientDomainError,
    ConfigurationError,
    DependencyError,
    DivergentIntegralError,
    HypothesisViolationError,
    IncompatibleDatumError,
    InsufficientDataError,
    QuadratureAccuracyError,
)
from bandflow.flow import (
    EvolveControls,
    EvolveTrace,
    Grid,
    GridState,
    InitialDatum,
    RhoDatum,
    TabulatedDatum,
    check_admissible,
    domination_time,
    evolve,
    exponential_datum,
    make_rho,
    perturbed_datum,
)
from bandflow.flow.grid import MIN_INTERVALS
from bandflow.verification import (
    CheckManager,
    check_comparison,
    check_convergence,
    check_convexity,
    check_gradient_bound,
    check_gradient_envelopes,
    check_interior_gradient,
    check_linfty_wedge,
    check_speed,
    check_theta_equation,
    slope_truncation,
)
from bandflow.waves import StationaryProfile, WaveSolution, solve_c_of_h, solve_cbar, stationary_profile

from .config import DATUMS, SWEEP_AXES, PdeConfig, RunConfig, load_config, resolve_output_dir
from .io import write_json, write_profile, write_snapshots, write_state
from .sweep import SweepSpec, run_sweep

logger = logging.getLogger("bandflow")

# fractions of the room between the rho threshold and min u0 tried for the companion
COMPANION_FRACTIONS = (0.5, 0.25, 0.125, 0.0625)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bandflow", description="Anisotropic curvature flow in a band.")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    parser.add_argument("--quiet", "-q", action="store_true", help="warnings and errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--config", help="TOML run configuration")
        p.add_argument("--out", help="output directory")

    tw = sub.add_parser("tw", help="traveling wave speed and profile")
    common(tw)
    tw.add_argument("--h", type=float, help="finite boundary slope (default: infinite)")

    ev = sub.add_parser("evolve", help="evolve the band flow")
    common(ev)
    ev.add_argument("--datum", choices=DATUMS)
    ev.add_argument("--file", help="CSV datum with columns x,u[,ux] or x,phi,psi for --datum user")
    ev.add_argument("--scheme", choices=[s.value for s in Scheme])
    ev.add_argument("--dt", type=float)
    ev.add_argument("--t-end", type=float, dest="t_end")

    ve = sub.add_parser("verify", help="run the verification suite")
    common(ve)
    ve.add_argument("--datum", choices=DATUMS)
    ve.add_argument("--file")
    ve.add_argument("--scheme", choices=[s.value for s in Scheme])
    ve.add_argument("--dt", type=float)
    ve.add_argument("--t-end", type=float, dest="t_end")
    ve.add_argument("--jobs", type=int, default=1, help="threads for the checks")

    sw = sub.add_parser("sweep", help="parameter sweep of wave speeds and spans")
    common(sw)
    sw.add_argument("--axis", choices=SWEEP_AXES)
    sw.add_argument("--values", help="comma-separated axis values")
    sw.add_argument("--jobs", type=int, help="worker processes")
    return parser


def _grid(pde: PdeConfig) -> Grid:
    return Grid.clustered(pde.n) if pde.grid == "clustered" else Grid.uniform(pde.n)


def _controls(pde: PdeConfig) -> EvolveControls:
    return EvolveControls(
        dt=pde.dt,
        dt_min=pde.dt_min,
        dt_max=max(pde.dt_max, pde.dt),
        adaptive=pde.adaptive,
        du_tol=pde.du_tol,
        snapshot_every=pde.snapshot_every,
        slope_cap=pde.slope_cap,
        resolution_cap=pde.resolution_cap,
        scheme=Scheme(pde.scheme),
    )


def _datum(
    pair: CoefficientPair,
    pde: PdeConfig,
    stationary: StationaryProfile,
    wave: WaveSolution | None,
) -> InitialDatum:
    if pde.datum == "rho":
        datum = make_rho(pair, stationary.threshold + pde.m1_margin, wave, stationary)
    elif pde.datum == "user":
        if not pde.file:
            raise ConfigurationError("--datum user needs --file or [pde] file")
        datum = TabulatedDatum.from_csv(pde.file)
    else:
        datum = exponential_datum(stationary, pde.m1_margin)
    if pde.kappa:
        datum = perturbed_datum(datum, pde.kappa, pde.mode)
    return datum


def _pde_overrides(args, config: RunConfig) -> RunConfig:
    return config.with_section(
        "pde",
        datum=getattr(args, "datum", None),
        file=getattr(args, "file", None),
        scheme=getattr(args, "scheme", None),
        dt=getattr(args, "dt", None),
        t_end=getattr(args, "t_end", None),
    )


def cmd_tw(args, config: RunConfig) -> ExitCode:
    """
    Solve the wave, print its speed and write wave.json and profile.csv.
    """
    pair = config.coefficients.build()
    out = resolve_output_dir(args.out, config)
    h = args.h if args.h is not None else math.inf
    wave = solve_c_of_h(pair, h, config.wave.tol, config.wave.nodes)
    write_json(out / "wave.json", wave.to_summary())
    write_profile(out / "profile.csv", wave.profile)
    label = "c_bar" if math.isinf(h) else f"c({h:g})"
    print(f"{label} = {wave.c:.15g}  (|d - 2| = {wave.residual:.2e}, tol {wave.tol:.1e})")
    for extra in config.wave.h:
        w = solve_c_of_h(pair, float(extra), config.wave.tol, config.wave.nodes)
        print(f"c({float(extra):g}) = {w.c:.15g}  (|d - 2| = {w.residual:.2e}, tol {w.tol:.1e})")
    return ExitCode.OK


def cmd_evolve(args, config: RunConfig) -> ExitCode:
    """
    Evolve the configured datum; write trace.json and snapshots.csv, or
    last_good_state.csv on blow-up.
    """
    config = _pde_overrides(args, config)
    pair = config.coefficients.build()
    out = resolve_output_dir(args.out, config)
    pde = config.pde
    stationary = stationary_profile(pair)
    wave = solve_cbar(pair, config.wave.tol, config.wave.nodes) if pde.datum == "rho" else None
    datum = _datum(pair, pde, stationary, wave)
    state = check_admissible(datum, _grid(pde), stationary)
    try:
        trace = evolve(state, pair, pde.t_end, _controls(pde))
    except BlowUpError as err:
        path = write_state(out / "last_good_state.csv", err.state)
        logger.error("blow-up: %s; last good state written to %s", err, path)
        return ExitCode.BLOW_UP
    trace.meta.update({"pair": pair.describe(), "datum_parameters": datum.describe()})
    write_json(out / "trace.json", trace.to_summary())
    write_snapshots(out / "snapshots.csv", trace)
    print(f"t = {trace.t_last:.6g}  u(0) = {trace.states[-1].center_value():.15g}  snapshots = {len(trace)}")
    if trace.horizon:
        h = trace.horizon
        print(
            f"horizon ({h['reason']}): edge slope {h['edge_slope']:.3g}, "
            f"wall resolution {h['wall_resolution']:.3g} at t = {h['t']:.6g}"
        )
    return ExitCode.OK


def _companion_below(
    pair: CoefficientPair,
    wave: WaveSolution,
    stationary: StationaryProfile,
    state: GridState,
) -> RhoDatum:
    """
    A rho datum strictly below `state` at every node. M1 starts halfway
    between the admissibility threshold and min u0 and is halved towards the
    threshold until the ordering holds.
    """
    room = float(np.min(state.u)) - stationary.threshold
    if not room > 0:
        raise DependencyError(f"min u0 does not exceed the rho threshold {stationary.threshold:.6g}")
    for fraction in COMPANION_FRACTIONS:
        rho = make_rho(pair, stationary.threshold + fraction * room, wave, stationary)
        values, _ = rho.values(state.x)
        if np.all(values < state.u):
            return rho
    raise DependencyError("no rho datum lies below u0")


def _slope_slack(
    pair: CoefficientPair,
    pde: PdeConfig,
    datum: InitialDatum,
    stationary: StationaryProfile,
    controls: EvolveControls,
    trace: EvolveTrace,
) -> float:
    """Slope error of `trace` estimated from a rerun on every other node."""
    if pde.n % 2 or pde.n // 2 < MIN_INTERVALS:
        logger.warning("n=%d has no nested coarse grid; slopes are checked without a discretization slack", pde.n)
        return 0.0
    coarse_state = check_admissible(datum, _grid(replace(pde, n=pde.n // 2)), stationary)
    try:
        coarse = evolve(coarse_state, pair, pde.t_end, controls)
    except BlowUpError as err:
        logger.warning("coarse rerun failed (%s); slopes are checked without a discretization slack", err)
        return 0.0
    slack = slope_truncation(trace, coarse)
    logger.info("slope discretization slack %.3g from the n=%d rerun", slack, pde.n // 2)
    return slack


def build_suite(config: RunConfig, jobs: int = 1) -> CheckManager:
    """
    Solve the waves, evolve the datum and its rho companion, and register the
    requested checks.

    The companion is rho with M1 + 1 for an unperturbed rho datum and
    otherwise a rho strictly below the datum, whose domination time T feeds
    the interior gradient check. The slope checks get a discretization slack
    from a rerun on every other node.

    Parameters
    ----------
    config : RunConfig
        The run configuration.
    jobs : int, optional
        Threads for the checks, by default 1

    Returns
    -------
    CheckManager
        The checks, with run metadata in `meta`.
    """
    pair = config.coefficients.build()
    pde, verify = config.pde, config.verify
    wave = solve_cbar(pair, config.wave.tol, config.wave.nodes)
    wave_used = wave if math.isnan(verify.cbar_override) else replace(wave, c=float(verify.cbar_override))
    stationary = stationary_profile(pair)
    symmetric = pair.symmetric and validate(pair, Requirement.EVEN).passed
    if pde.datum == "rho" and not symmetric:
        logger.warning("rho needs even coefficients; using the exponential datum")
        pde = replace(pde, datum="exponential")
    grid, controls = _grid(pde), _controls(pde)
    datum = _datum(pair, pde, stationary, wave)
    state = check_admissible(datum, grid, stationary)
    trace = evolve(state, pair, pde.t_end, controls)

    companion, companion_M1, companion_gap, T = None, None, None, None
    if symmetric:
        if pde.datum == "rho" and not pde.kappa:
            T = 0.0
            rho = make_rho(pair, stationary.threshold + pde.m1_margin + 1.0, wave, stationary)
            companion = evolve(rho.state(grid), pair, pde.t_end, controls)
            companion_M1 = rho.M1
            companion_gap = float(np.min(state.u - companion.states[0].u))
        else:
            try:
                rho = _companion_below(pair, wave, stationary, state)
            except DependencyError as err:
                logger.warning("no rho companion: %s", err)
            else:
                rho_state = rho.state(grid)
                try:
                    T, _ = domination_time(rho_state, state.u, pair, controls, t_max=pde.t_end)
                except InsufficientDataError as err:
                    logger.warning("%s", err)
                companion = evolve(rho_state, pair, pde.t_end, controls)
                companion_M1 = rho.M1
                companion_gap = float(np.min(state.u - rho_state.u))
    try:
        wave_h0 = solve_c_of_h(pair, verify.h0, config.wave.tol, config.wave.nodes)
    except HypothesisViolationError as err:
        logger.warning("no wave for h0=%g: %s", verify.h0, err)
        wave_h0 = None
    slack = 0.0
    if {"gradient_envelopes", "interior_gradient"} & set(verify.checks):
        slack = _slope_slack(pair, pde, datum, stationary, controls, trace)

    def comparison():
        if companion is None:
            raise DependencyError("comparison needs the rho companion run")
        return check_comparison(companion, trace)

    available = {
        "comparison": comparison,
        "convergence": lambda: check_convergence(trace, wave_used, verify.epsilon, rel_tol=verify.rel_tol, speed_tol=verify.speed_tol),
        "convexity": lambda: check_convexity(trace),
        "gradient_bound": lambda: check_gradient_bound(trace),
        "gradient_envelopes": lambda: check_gradient_envelopes(trace, wave, wave_h0, disc_slack=slack),
        "interior_gradient": lambda: check_interior_gradient(trace, wave, T, verify.epsilon, disc_slack=slack),
        "linfty_wedge": lambda: check_linfty_wedge(trace, wave_used, verify.rel_tol, stationary, verify.epsilon),
        "speed": lambda: check_speed(trace, wave_used, verify.speed_tol),
        "theta_equation": lambda: check_theta_equation(trace, pair, verify.epsilon),
    }
    meta = {
        "pair": pair.describe(),
        "grid": grid.describe(),
        "scheme": controls.scheme.value,
        "datum": datum.describe(),
        "horizon": trace.horizon,
        "domination_time": T,
        "companion_M1": companion_M1,
        "companion_gap": companion_gap,
        "slope_slack": slack,
        "c_bar": wave.c,
        "c_bar_used": wave_used.c,
        "M": stationary.M,
    }
    return CheckManager({name: available[name] for name in verify.checks}, max_workers=jobs, meta=meta)


def cmd_verify(args, config: RunConfig) -> ExitCode:
    """
    Run the suite end to end and write report.json; exit 1 iff a check fails.
    """
    config = _pde_overrides(args, config)
    out = resolve_output_dir(args.out, config)
    manager = build_suite(config, args.jobs)
    report = manager.report()
    report.write(out / "report.json")
    for check in report.checks:
        print(f"{check.name}: {check.status.value}" + (f"  ({check.note})" if check.note else ""))
    return report.exit_code


def cmd_sweep(args, config: RunConfig) -> ExitCode:
    """
    Sweep h, c or a coefficient parameter and write sweep.csv.
    """
    values = None
    if args.values is not None:
        try:
            values = [float(v) for v in args.values.split(",") if v.strip()]
        except ValueError:
            raise ConfigurationError(f"--values must be comma-separated numbers, got {args.values!r}") from None
    config = config.with_section("sweep", axis=args.axis, values=values, jobs=args.jobs)
    out = resolve_output_dir(args.out, config)
    spec = SweepSpec.from_config(config)
    rows = run_sweep(spec, config, out / "sweep.csv", config.sweep.jobs)
    for row in rows:
        print(f"{spec.axis}={row['param']:g}  c={row['c']:.15g}  span={row['span']:.15g}  {row['status']}")
    return ExitCode.OK


COMMANDS = {"tw": cmd_tw, "evolve": cmd_evolve, "verify": cmd_verify, "sweep": cmd_sweep}


def main(argv: list[str] | None = None) -> int:
    """
    Parse the command line, run the subcommand and map errors to exit codes:
    2 for usage, configuration and hypothesis errors, 3 for blow-up.
    """
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config)
        return int(COMMANDS[args.command](args, config))
    except (
        ConfigurationError,
        HypothesisViolationError,
        IncompatibleDatumError,
        CoefficientDomainError,
        DivergentIntegralError,
        QuadratureAccuracyError,
    ) as err:
        logger.error("%s", err)
        return int(ExitCode.USAGE)
    except BlowUpError as err:
        logger.error("blow-up: %s", err)
        return int(ExitCode.BLOW_UP)
