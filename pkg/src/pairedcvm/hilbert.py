"""Discretized L2[0, 1]: uniform grids, curves, the normalized Legendre basis
and trapezoid-rule inner products.

All curves live on the unit interval. A time window of any length is mapped
affinely onto [0, 1] before it gets here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import DomainError, GridMismatchError

DEFAULT_MAX_INDEX = 50


@dataclass(frozen=True)
class Grid:
    """Uniform partition ``t_k = k / (point_count - 1)`` of [0, 1]."""

    point_count: int

    def __post_init__(self):
        if int(self.point_count) != self.point_count or self.point_count < 2:
            raise DomainError(f"grid needs at least 2 points, got {self.point_count!r}")
        object.__setattr__(self, "point_count", int(self.point_count))

    @property
    def points(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.point_count)

    @property
    def step(self) -> float:
        return 1.0 / (self.point_count - 1)

    def trapezoid_weights(self) -> np.ndarray:
        return _trapezoid_weights(self.point_count).copy()


@lru_cache(maxsize=64)
def _trapezoid_weights(point_count: int) -> np.ndarray:
    w = np.full(point_count, 1.0 / (point_count - 1))
    w[0] *= 0.5
    w[-1] *= 0.5
    w.setflags(write=False)
    return w


@dataclass(frozen=True, eq=False)
class FunctionSample:
    """One curve: values observed on a uniform grid of [0, 1]."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.shape[0] != self.grid.point_count:
            raise DomainError(
                f"expected {self.grid.point_count} values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise DomainError("curve values must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, func, grid: Grid) -> "FunctionSample":
        return cls(grid, np.asarray(func(grid.points), dtype=float) * np.ones(grid.point_count))

    def __add__(self, other):
        _check_same_grid(self, other)
        return FunctionSample(self.grid, self.values + other.values)

    def __mul__(self, scalar):
        return FunctionSample(self.grid, float(scalar) * self.values)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class PairedSample:
    """``n`` pairs of curves ``(X_j1, X_j2)`` on one shared grid.

    Values are stored as a single ``(n, 2, point_count)`` array; column 0 of
    the middle axis is the first component of each pair.
    """

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 3 or values.shape[1] != 2:
            raise DomainError(f"paired values must have shape (n, 2, points), got {values.shape}")
        if values.shape[2] != self.grid.point_count:
            raise GridMismatchError(
                f"values have {values.shape[2]} points, grid has {self.grid.point_count}"
            )
        if values.shape[0] < 1:
            raise DomainError("paired sample is empty")
        if not np.all(np.isfinite(values)):
            raise DomainError("curve values must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_pairs(cls, pairs) -> "PairedSample":
        pairs = list(pairs)
        if not pairs:
            raise DomainError("paired sample is empty")
        grid = pairs[0][0].grid
        for first, second in pairs:
            if first.grid != grid or second.grid != grid:
                raise GridMismatchError("all curves of a paired sample must share one grid")
        return cls(grid, np.array([[a.values, b.values] for a, b in pairs]))

    @classmethod
    def from_arrays(cls, first, second) -> "PairedSample":
        first = np.asarray(first, dtype=float)
        second = np.asarray(second, dtype=float)
        if first.shape != second.shape or first.ndim != 2:
            raise GridMismatchError(
                f"component arrays must be 2-D and equal in shape, got {first.shape} and {second.shape}"
            )
        return cls(Grid(first.shape[1]), np.stack([first, second], axis=1))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def pair(self, j: int) -> tuple[FunctionSample, FunctionSample]:
        return (FunctionSample(self.grid, self.values[j, 0]),
                FunctionSample(self.grid, self.values[j, 1]))

    def __len__(self):
        return self.n


def _check_same_grid(f: FunctionSample, g: FunctionSample):
    if f.grid != g.grid:
        raise GridMismatchError(
            f"grids differ ({f.grid.point_count} vs {g.grid.point_count} points)"
        )


def legendre_values(degree_count: int, t) -> np.ndarray:
    """Normalized Legendre polynomials of degree ``0 .. degree_count-1`` at ``t``.

    Returns an array of shape ``(degree_count,) + t.shape`` holding
    ``sqrt(2d + 1) * P_d(2t - 1)``, with ``P_d`` from Bonnet's recurrence
    ``(d + 1) P_{d+1}(x) = (2d + 1) x P_d(x) - d P_{d-1}(x)``.
    """
    t = np.asarray(t, dtype=float)
    x = 2.0 * t - 1.0
    out = np.empty((degree_count,) + x.shape)
    p_prev = np.ones_like(x)
    out[0] = p_prev
    if degree_count > 1:
        p = x.copy()
        out[1] = p
        for d in range(1, degree_count - 1):
            p_prev, p = p, ((2 * d + 1) * x * p - d * p_prev) / (d + 1)
            out[d + 1] = p
    scale = np.sqrt(2.0 * np.arange(degree_count) + 1.0)
    return out * scale.reshape((-1,) + (1,) * x.ndim)


def legendre_eval(index: int, t: float) -> float:
    """Basis element ``e_index`` (1-based, degree ``index - 1``) evaluated at ``t``."""
    if int(index) != index or index < 1:
        raise DomainError(f"basis index must be a positive integer, got {index!r}")
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1], got {t!r}")
    return float(legendre_values(int(index), t)[-1])


@lru_cache(maxsize=32)
def _basis_matrix(max_index: int, point_count: int) -> np.ndarray:
    basis = legendre_values(max_index, Grid(point_count).points)
    basis.setflags(write=False)
    return basis


def basis_matrix(grid: Grid, max_index: int = DEFAULT_MAX_INDEX) -> np.ndarray:
    """``(max_index, point_count)`` array of the first basis elements sampled on ``grid``."""
    if max_index < 1:
        raise DomainError("max_index must be >= 1")
    return _basis_matrix(int(max_index), grid.point_count)


def inner_product(f: FunctionSample, g: FunctionSample) -> float:
    """Trapezoid approximation of the L2[0, 1] inner product."""
    _check_same_grid(f, g)
    return float(np.sum(f.values * g.values * _trapezoid_weights(f.grid.point_count)))


def coefficient_array(values, max_index: int = DEFAULT_MAX_INDEX) -> np.ndarray:
    """Basis coefficients for curves stacked along the last axis of ``values``.

    ``values`` has shape ``(..., point_count)``; the result has shape
    ``(..., max_index)``. Summation is elementwise (no BLAS) so results do not
    depend on threading.
    """
    values = np.asarray(values, dtype=float)
    point_count = values.shape[-1]
    weighted = _basis_matrix(int(max_index), point_count) * _trapezoid_weights(point_count)
    return np.sum(values[..., None, :] * weighted, axis=-1)


def basis_coefficients(f: FunctionSample, max_index: int = DEFAULT_MAX_INDEX) -> np.ndarray:
    """Vector ``c`` with ``c[i-1] = <e_i, f>`` for ``i = 1 .. max_index``."""
    if int(max_index) != max_index or max_index < 1:
        raise DomainError(f"max_index must be a positive integer, got {max_index!r}")
    return coefficient_array(f.values, int(max_index))


def coefficient_cache(sample: PairedSample, max_index: int = DEFAULT_MAX_INDEX) -> np.ndarray:
    """Basis coefficients of every curve in ``sample``, shape ``(n, 2, max_index)``."""
    if int(max_index) != max_index or max_index < 1:
        raise DomainError(f"max_index must be a positive integer, got {max_index!r}")
    return coefficient_array(sample.values, int(max_index))


class LegendreBasis(TransformerMixin, BaseEstimator):
    """Map curves sampled on a uniform grid of [0, 1] to Legendre coefficients.

    Parameters
    ----------
    max_index : int, default=50
        Number of basis elements kept.

    Attributes
    ----------
    grid_ : Grid
        Grid seen during ``fit``; ``transform`` requires the same one.
    """

    def __init__(self, max_index=DEFAULT_MAX_INDEX):
        self.max_index = max_index

    def fit(self, X, y=None):
        from .validation import check_curves

        X = check_curves(X)
        if int(self.max_index) != self.max_index or self.max_index < 1:
            raise DomainError(f"max_index must be a positive integer, got {self.max_index!r}")
        self.grid_ = Grid(X.shape[1])
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        from .validation import check_curves

        check_is_fitted(self, "grid_")
        X = check_curves(X)
        if X.shape[1] != self.grid_.point_count:
            raise GridMismatchError(
                f"fitted on {self.grid_.point_count} grid points, got {X.shape[1]}"
            )
        return coefficient_array(X, int(self.max_index))
