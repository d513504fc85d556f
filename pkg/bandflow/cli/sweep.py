import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from bandflow.constants import CSV_FORMAT
from bandflow.errors import BandflowError, ConfigurationError
from bandflow.utils import is_strictly_monotone
from bandflow.waves import reconstruct_profile, solve_c_of_h, solve_cbar, span, x_minus, x_plus

from .config import CoefficientsConfig, RunConfig, SWEEP_AXES

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ("param", "c", "x_plus", "x_minus", "span", "height", "status")


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigurationError(f"sweep axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if not self.values:
            raise ConfigurationError("sweep axis has no values")
        if len(self.values) > 1 and not is_strictly_monotone(self.values):
            raise ConfigurationError("sweep axis values must be strictly monotone")

    @classmethod
    def from_config(cls, config: RunConfig) -> "SweepSpec":
        return cls(config.sweep.axis, tuple(float(v) for v in config.sweep.values))


def sweep_point(coefficients: CoefficientsConfig, tol: float, nodes: int, axis: str, value: float) -> dict:
    """
    Solve one point of a sweep. Failures become rows with a status message.

    Parameters
    ----------
    coefficients : CoefficientsConfig
        The base coefficients.
    tol : float
        Root tolerance.
    nodes : int
        Profile nodes.
    axis : str
        'h', 'c' or a coefficient parameter name.
    value : float
        The axis value.

    Returns
    -------
    dict
        One row keyed by SWEEP_COLUMNS.
    """
    row = {"param": value, "c": math.nan, "x_plus": math.nan, "x_minus": math.nan, "span": math.nan, "height": math.nan}
    try:
        if axis in ("h", "c"):
            pair = coefficients.build()
        else:
            pair = replace(coefficients, **{axis: value}).build()
        if axis == "c":
            xp, xm = x_plus(pair, value), x_minus(pair, value)
            profile = reconstruct_profile(pair, value, n=nodes)
            height = profile.height if pair.extrema().b_sup < 0 else math.inf
            row.update(c=value, x_plus=xp, x_minus=xm, span=span(pair, value), height=height)
        else:
            wave = solve_c_of_h(pair, value, tol, nodes) if axis == "h" else solve_cbar(pair, tol, nodes)
            row.update(c=wave.c, x_plus=wave.x_plus, x_minus=wave.x_minus, span=wave.x_plus - wave.x_minus, height=wave.height)
        row["status"] = "ok"
    except (BandflowError, ValueError) as err:
        logger.warning("sweep point %s=%g failed: %s", axis, value, err)
        row["status"] = str(err).replace(",", ";").replace("\n", " ")
    return row


def format_row(row: dict) -> str:
    values = [CSV_FORMAT % row[name] for name in SWEEP_COLUMNS[:-1]]
    return ",".join(values + [row["status"]])


def run_sweep(spec: SweepSpec, config: RunConfig, path, jobs: int = 1) -> list[dict]:
    """
    Run a sweep and write `sweep.csv` rows in axis order, one flushed line per
    finished point.

    Parameters
    ----------
    spec : SweepSpec
        Axis and values.
    config : RunConfig
        Coefficient and wave settings.
    path : str or Path
        Output CSV.
    jobs : int, optional
        Worker processes, by default 1

    Returns
    -------
    list[dict]
        The rows.
    """
    args = (config.coefficients, config.wave.tol, config.wave.nodes, spec.axis)
    rows = []
    with Path(path).open("w") as f:
        f.write(",".join(SWEEP_COLUMNS) + "\n")
        if jobs <= 1:
            results = (sweep_point(*args, v) for v in spec.values)
            for row in results:
                rows.append(row)
                f.write(format_row(row) + "\n")
                f.flush()
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(sweep_point, *args, v) for v in spec.values]
                for future in futures:
                    row = future.result()
                    rows.append(row)
                    f.write(format_row(row) + "\n")
                    f.flush()
    logger.info("sweep over %s: %d points, %d failed", spec.axis, len(rows), sum(r["status"] != "ok" for r in rows))
    return rows
