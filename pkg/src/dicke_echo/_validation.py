"""Input checks shared by the estimator front-end and the CLI."""

import numpy as np
from sklearn.utils import check_array


def check_couplings(X) -> np.ndarray:
    """Coerce ``X`` (shape ``(n,)`` or ``(n, 1)``) to a 1-D array of couplings."""
    arr = check_array(X, ensure_2d=False, dtype=np.float64)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(f"expected a single coupling column, got shape {arr.shape}")
        arr = arr[:, 0]
    if np.any(arr < 0):
        raise ValueError("couplings must be non-negative")
    return arr


def check_times(times) -> np.ndarray:
    t = check_array(np.atleast_1d(times), ensure_2d=False, dtype=np.float64)
    if t.ndim != 1:
        raise ValueError("times must be one-dimensional")
    if t.size > 1 and not np.all(np.diff(t) > 0):
        raise ValueError("times must be strictly increasing")
    return t
