"""Input validation helpers, in the spirit of ``sklearn.utils.validation``."""

import numbers

import numpy as np

from .errors import PreconditionError


def fmt_point(p):
    return "(" + ", ".join(f"{float(v):.6g}" for v in np.ravel(p)) + ")"


def check_point(p, name="point"):
    """Return ``p`` as a finite float array of shape (2,)."""
    try:
        arr = np.asarray(p, dtype=float).reshape(-1)
    except (TypeError, ValueError) as exc:
        raise PreconditionError(f"{name} is not numeric: {p!r}", name) from exc
    if arr.shape != (2,):
        raise PreconditionError(f"{name} must have exactly two coordinates, got {arr.shape}", name)
    if not np.all(np.isfinite(arr)):
        raise PreconditionError(f"{name} has non-finite coordinates: {p!r}", name)
    return arr


def check_points(P, name="points"):
    """Return ``P`` as a finite float array of shape (n, 2)."""
    arr = np.asarray(P, dtype=float)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise PreconditionError(f"{name} must have shape (n, 2), got {arr.shape}", name)
    if not np.all(np.isfinite(arr)):
        raise PreconditionError(f"{name} contains non-finite values", name)
    return arr


def check_scalar(x, name, *, min_val=None, max_val=None, include_min=True,
                 include_max=True, target_type=numbers.Real):
    """Validate a scalar parameter's type and range; mirrors ``sklearn.utils.check_scalar``."""
    if not isinstance(x, target_type) or isinstance(x, bool):
        raise PreconditionError(f"{name} must be {target_type.__name__}, got {type(x).__name__}", name)
    if isinstance(x, numbers.Real) and not np.isfinite(x):
        raise PreconditionError(f"{name} must be finite, got {x}", name)
    if min_val is not None:
        if (include_min and x < min_val) or (not include_min and x <= min_val):
            op = ">=" if include_min else ">"
            raise PreconditionError(f"{name} == {x}, must be {op} {min_val}", name)
    if max_val is not None:
        if (include_max and x > max_val) or (not include_max and x >= max_val):
            op = "<=" if include_max else "<"
            raise PreconditionError(f"{name} == {x}, must be {op} {max_val}", name)
    return x


def check_unit_vector(v, name="direction"):
    v = check_point(v, name)
    norm = np.hypot(v[0], v[1])
    if norm == 0.0:
        raise PreconditionError(f"{name} must be nonzero", name)
    return v / norm


def check_random_state(seed):
    """Turn ``seed`` into a ``numpy.random.Generator``."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, (numbers.Integral, np.integer)):
        return np.random.default_rng(seed)
    raise PreconditionError(f"{seed!r} cannot be used to seed a random generator")
