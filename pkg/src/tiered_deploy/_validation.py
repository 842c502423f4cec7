"""Input checks shared by the estimators."""

import numbers

import numpy as np
from sklearn.utils import check_array


def check_sample_weight(sample_weight, X) -> np.ndarray:
    n = X.shape[0]
    if sample_weight is None:
        return np.ones(n)
    if isinstance(sample_weight, numbers.Number):
        return np.full(n, float(sample_weight))
    sw = check_array(sample_weight, ensure_2d=False, dtype=np.float64)
    if sw.shape != (n,):
        raise ValueError(f"sample_weight.shape == {sw.shape}, expected ({n},)")
    if np.any(sw < 0):
        raise ValueError("sample_weight must be nonnegative")
    return sw


def check_count(value, name: str, minimum: int = 1) -> int:
    if not isinstance(value, numbers.Integral) or isinstance(value, bool) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_nonnegative(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or isinstance(value, bool) or not value >= 0:
        raise ValueError(f"{name} must be a nonnegative number, got {value!r}")
    return float(value)


def check_points(points, n_points: int, n_features: int, name: str) -> np.ndarray:
    arr = check_array(points, dtype=np.float64, ensure_2d=False)
    if arr.ndim == 1 and n_features == 1:
        arr = arr[:, None]
    if arr.shape != (n_points, n_features):
        raise ValueError(f"{name} must have shape ({n_points}, {n_features}), got {arr.shape}")
    return arr.copy()


def random_points(X, n_points: int, rng) -> np.ndarray:
    """Uniform draws from the bounding box of ``X``."""
    return rng.uniform(X.min(axis=0), X.max(axis=0), size=(n_points, X.shape[1]))
