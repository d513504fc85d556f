"""
Run configuration read from TOML files with flat sections:

    [coefficients]  family, alpha, beta, eps, delta, degenerate, file, symmetric
    [wave]          tol, h, nodes
    [pde]           n, grid, scheme, t_end, dt, dt_min, dt_max, adaptive, du_tol,
                    snapshot_every, slope_cap, resolution_cap, datum, m1_margin,
                    file, kappa, mode
    [verify]        checks, epsilon, h0, rel_tol, speed_tol, cbar_override
    [output]        directory
    [sweep]         axis, values, jobs

Every key has a default; unknown sections and keys, values of the wrong type
and values out of range are rejected with ConfigurationError.
"""

import math
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from bandflow.coefficients import CoefficientPair, ConstantPair, RationalBumpPair, TabulatedPair
from bandflow.constants import (
    EPSILON,
    PROFILE_NODES,
    RESOLUTION_CAP,
    ROOT_TOL,
    SLOPE_CAP,
    CoefficientFamily,
    Scheme,
)
from bandflow.errors import ConfigurationError
from bandflow.flow.grid import MIN_INTERVALS

OUTPUT_ENV = "BANDFLOW_OUT"
DEFAULT_OUTPUT = "bandflow-out"

CHECK_NAMES = (
    "comparison",
    "convergence",
    "convexity",
    "gradient_bound",
    "gradient_envelopes",
    "interior_gradient",
    "linfty_wedge",
    "speed",
    "theta_equation",
)
DATUMS = ("rho", "user", "exponential")
SWEEP_AXES = ("h", "c", "alpha", "eps", "beta", "delta")


@dataclass(frozen=True)
class CoefficientsConfig:
    family: str = CoefficientFamily.CONSTANT.value
    alpha: float = 1.0
    beta: float = 0.5
    eps: float = 0.0
    delta: float = 0.0
    degenerate: bool = False
    file: str = ""
    symmetric: bool = False

    def __post_init__(self):
        try:
            CoefficientFamily(self.family)
        except ValueError:
            raise ConfigurationError(f"[coefficients] family: unknown family {self.family!r}") from None

    def build(self) -> CoefficientPair:
        """
        Instantiate the coefficient pair.
        """
        family = CoefficientFamily(self.family)
        if family == CoefficientFamily.CONSTANT:
            return ConstantPair(alpha=self.alpha, beta=self.beta, degenerate=self.degenerate)
        if family == CoefficientFamily.RATIONAL_BUMP:
            return RationalBumpPair(alpha=self.alpha, eps=self.eps, beta=self.beta, delta=self.delta)
        if not self.file:
            raise ConfigurationError("[coefficients] file is required for the user-tabulated family")
        return TabulatedPair.from_csv(self.file, symmetric=self.symmetric)


@dataclass(frozen=True)
class WaveConfig:
    tol: float = ROOT_TOL
    h: list = field(default_factory=list)
    nodes: int = PROFILE_NODES

    def __post_init__(self):
        _require(self.tol > 0, "wave", "tol", "must be positive", self.tol)
        _require(self.nodes >= 16, "wave", "nodes", "must be at least 16", self.nodes)
        _require(all(_is_number(h) and h > 0 for h in self.h), "wave", "h", "needs positive numbers", self.h)


@dataclass(frozen=True)
class PdeConfig:
    n: int = 512
    grid: str = "clustered"
    scheme: str = Scheme.SEMI_IMPLICIT.value
    t_end: float = 60.0
    dt: float = 1e-3
    dt_min: float = 1e-10
    dt_max: float = 1e-2
    adaptive: bool = True
    du_tol: float = 0.05
    snapshot_every: float = 0.1
    slope_cap: float = SLOPE_CAP
    resolution_cap: float = RESOLUTION_CAP
    datum: str = "rho"
    m1_margin: float = 1.0
    file: str = ""
    kappa: float = 0.0
    mode: int = 1

    def __post_init__(self):
        if self.grid not in ("uniform", "clustered"):
            raise ConfigurationError(f"[pde] grid: expected 'uniform' or 'clustered', got {self.grid!r}")
        if self.datum not in DATUMS:
            raise ConfigurationError(f"[pde] datum: expected one of {DATUMS}, got {self.datum!r}")
        try:
            Scheme(self.scheme)
        except ValueError:
            raise ConfigurationError(f"[pde] scheme: unknown scheme {self.scheme!r}") from None
        _require(self.n >= MIN_INTERVALS, "pde", "n", f"must be at least {MIN_INTERVALS}", self.n)
        for key in ("t_end", "dt", "dt_min", "dt_max", "du_tol", "snapshot_every", "slope_cap", "resolution_cap"):
            _require(getattr(self, key) > 0, "pde", key, "must be positive", getattr(self, key))
        _require(self.dt_min <= self.dt, "pde", "dt_min", "must not exceed dt", self.dt_min)
        _require(self.dt_min <= self.dt_max, "pde", "dt_min", "must not exceed dt_max", self.dt_min)
        _require(self.m1_margin > 0, "pde", "m1_margin", "must be positive", self.m1_margin)
        _require(self.mode >= 0, "pde", "mode", "must be non-negative", self.mode)


@dataclass(frozen=True)
class VerifyConfig:
    checks: list = field(default_factory=lambda: list(CHECK_NAMES))
    epsilon: float = EPSILON
    h0: float = 5.0
    rel_tol: float = 0.05
    speed_tol: float = 0.02
    cbar_override: float = math.nan

    def __post_init__(self):
        unknown = sorted(set(self.checks) - set(CHECK_NAMES))
        if unknown:
            raise ConfigurationError(f"[verify] checks: unknown checks {', '.join(unknown)}")
        if not 0 < self.epsilon < 0.25:
            raise ConfigurationError(f"[verify] epsilon must lie in (0, 0.25), got {self.epsilon!r}")
        for key in ("h0", "rel_tol", "speed_tol"):
            _require(getattr(self, key) > 0, "verify", key, "must be positive", getattr(self, key))


@dataclass(frozen=True)
class OutputConfig:
    directory: str = ""


@dataclass(frozen=True)
class SweepConfig:
    axis: str = "h"
    values: list = field(default_factory=list)
    jobs: int = 1

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigurationError(f"[sweep] axis: expected one of {SWEEP_AXES}, got {self.axis!r}")
        _require(self.jobs >= 1, "sweep", "jobs", "must be at least 1", self.jobs)
        _require(all(_is_number(v) for v in self.values), "sweep", "values", "needs numbers", self.values)


@dataclass(frozen=True)
class RunConfig:
    coefficients: CoefficientsConfig = field(default_factory=CoefficientsConfig)
    wave: WaveConfig = field(default_factory=WaveConfig)
    pde: PdeConfig = field(default_factory=PdeConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)

    def with_section(self, name: str, **changes) -> "RunConfig":
        """Copy with some keys of one section replaced; None values are ignored."""
        changes = {k: v for k, v in changes.items() if v is not None}
        if not changes:
            return self
        return replace(self, **{name: _section(type(getattr(self, name)), name, {**vars(getattr(self, name)), **changes})})


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _require(ok: bool, section: str, key: str, message: str, value) -> None:
    if not ok:
        raise ConfigurationError(f"[{section}] {key} {message}, got {value!r}")


def _check_types(cls, name: str, values: dict) -> None:
    """Reject values whose TOML type does not match the field annotation."""
    for f in fields(cls):
        if f.name not in values:
            continue
        value = values[f.name]
        if f.type is float:
            ok = _is_number(value)
        elif f.type is int:
            ok = isinstance(value, int) and not isinstance(value, bool)
        else:
            ok = isinstance(value, f.type)
        _require(ok, name, f.name, f"must be of type {f.type.__name__}", value)


def _section(cls, name: str, values: dict):
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigurationError(f"[{name}] unknown keys: {', '.join(unknown)}")
    _check_types(cls, name, values)
    try:
        return cls(**values)
    except ConfigurationError:
        raise
    except (TypeError, ValueError) as err:
        raise ConfigurationError(f"[{name}] {err}") from None


def parse_config(data: dict) -> RunConfig:
    """
    Build a RunConfig from parsed TOML.

    Parameters
    ----------
    data : dict
        Mapping of section names to key/value tables.

    Returns
    -------
    RunConfig
        The configuration.

    Raises
    ------
    ConfigurationError
        On unknown sections or keys and on invalid values.
    """
    sections = {f.name: f for f in fields(RunConfig)}
    unknown = sorted(set(data) - set(sections))
    if unknown:
        raise ConfigurationError(f"unknown sections: {', '.join(unknown)}")
    built = {}
    for name, value in data.items():
        if not isinstance(value, dict):
            raise ConfigurationError(f"[{name}] must be a table of keys")
        built[name] = _section(sections[name].default_factory, name, value)
    return RunConfig(**built)


def load_config(path) -> RunConfig:
    """
    Read a TOML run configuration; a missing path gives the defaults.
    """
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        with path.open("rb") as f:
            data = tomllib.load(f)
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as err:
        raise ConfigurationError(f"malformed config {path}: {err}") from None
    return parse_config(data)


def resolve_output_dir(cli_out: str | None, config: RunConfig) -> Path:
    """
    Output directory from --out, then BANDFLOW_OUT, then [output] directory,
    then ./bandflow-out; created if missing.
    """
    choice = cli_out or os.environ.get(OUTPUT_ENV) or config.output.directory or DEFAULT_OUTPUT
    out = Path(choice)
    out.mkdir(parents=True, exist_ok=True)
    return out
