import math

import numpy as np


def is_strictly_increasing(values) -> bool:
    """
    Return True if the values are strictly increasing.

    Parameters
    ----------
    values : array_like
        The values to be checked.

    Returns
    -------
    bool
        True if every value is larger than the previous one.
    """
    values = np.asarray(values, dtype=float)
    return bool(np.all(np.diff(values) > 0))


def is_strictly_monotone(values) -> bool:
    values = np.asarray(values, dtype=float)
    steps = np.diff(values)
    return bool(np.all(steps > 0) or np.all(steps < 0))


def chebyshev_angles(n: int, half_width: float, closed: bool = True) -> np.ndarray:
    """
    Chebyshev-spaced angles in [-half_width, half_width], clustered at both
    ends and sorted increasingly.

    Parameters
    ----------
    n : int
        Number of angles.
    half_width : float
        Half width of the angle interval.
    closed : bool, optional
        True for Chebyshev-Lobatto points (endpoints included) and False for
        Chebyshev points of the first kind (open interval), by default True

    Returns
    -------
    np.ndarray
        The angles.
    """
    k = np.arange(n)
    if closed:
        nodes = -np.cos(np.pi * k / (n - 1))
    else:
        nodes = -np.cos(np.pi * (k + 0.5) / n)
    return half_width * nodes


def jsonable(value):
    """
    Convert numpy scalars/arrays and non-finite floats into values that
    `json.dumps` writes as valid JSON.
    """
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if hasattr(value, "value"):  # enums
        return value.value
    return value
