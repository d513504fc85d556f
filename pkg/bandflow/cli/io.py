import json
from pathlib import Path

import numpy as np

from bandflow.constants import CSV_FORMAT
from bandflow.flow import EvolveTrace, GridState
from bandflow.utils import jsonable
from bandflow.waves import Profile

PROFILE_COLUMNS = ("x", "phi", "psi")
SNAPSHOT_COLUMNS = ("t", "x", "u", "ux", "uxx", "theta")
STATE_COLUMNS = ("x", "u")


def write_csv(path, columns: tuple[str, ...], rows: np.ndarray) -> Path:
    """
    Write rows under a header line with 17 significant digits.

    Parameters
    ----------
    path : str or Path
        Output file.
    columns : tuple[str, ...]
        Column names.
    rows : np.ndarray
        2-d array with one column per name.

    Returns
    -------
    Path
        The written file.
    """
    path = Path(path)
    np.savetxt(path, np.asarray(rows, dtype=float), delimiter=",", fmt=CSV_FORMAT, header=",".join(columns), comments="")
    return path


def read_csv(path) -> dict[str, np.ndarray]:
    """
    Read a file written by `write_csv` into columns by name.
    """
    path = Path(path)
    with path.open() as f:
        header = [name.strip() for name in f.readline().split(",")]
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, i] for i, name in enumerate(header)}


def write_profile(path, profile: Profile) -> Path:
    return write_csv(path, PROFILE_COLUMNS, profile.to_columns())


def write_snapshots(path, trace: EvolveTrace) -> Path:
    return write_csv(path, SNAPSHOT_COLUMNS, trace.snapshot_rows())


def write_state(path, state: GridState) -> Path:
    return write_csv(path, STATE_COLUMNS, np.column_stack([state.x, state.u]))


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(jsonable(payload), sort_keys=True, indent=2) + "\n")
    return path
