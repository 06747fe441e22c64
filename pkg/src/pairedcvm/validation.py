"""Input checks shared by the estimators."""

import numbers

import numpy as np
from sklearn.utils import check_array

from .exceptions import ConfigError, DegenerateSampleError, GridMismatchError


def check_curves(X, min_samples=1):
    """Validate a 2-D array of curves (rows) sampled on a uniform grid (columns)."""
    X = check_array(X, dtype=np.float64, ensure_min_samples=min_samples,
                    ensure_min_features=2)
    return X


def check_paired(X1, X2, min_samples=2):
    """Validate two component arrays of a paired functional sample."""
    X1 = check_array(X1, dtype=np.float64, ensure_min_features=2)
    X2 = check_array(X2, dtype=np.float64, ensure_min_features=2)
    if X1.shape[0] != X2.shape[0]:
        raise GridMismatchError(
            f"paired components differ in size: {X1.shape[0]} vs {X2.shape[0]} curves"
        )
    if X1.shape[1] != X2.shape[1]:
        raise GridMismatchError(
            f"paired components use different grids: {X1.shape[1]} vs {X2.shape[1]} points"
        )
    if X1.shape[0] < min_samples:
        raise DegenerateSampleError(f"need at least {min_samples} pairs, got {X1.shape[0]}")
    return X1, X2


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < minimum:
        raise ConfigError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_positive_float(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Real) or not value > 0 \
            or not np.isfinite(value):
        raise ConfigError(f"{name} must be a positive real, got {value!r}")
    return float(value)


def check_alpha(alpha, name="alpha"):
    if isinstance(alpha, bool) or not isinstance(alpha, numbers.Real) or not 0 < alpha < 1:
        raise ConfigError(f"{name} must lie in (0, 1), got {alpha!r}")
    return float(alpha)
