"""Random projection directions and projection scores.

A direction is a finite unit-norm combination ``sum_l m_l e_{i_l}`` of
Legendre basis elements. Directions are drawn in four steps: a term count
``k`` from a shifted Poisson law, ``k`` distinct basis indices from a second
(truncated) shifted Poisson law, weights uniform on the unit sphere of R^k,
then assembly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.stats import poisson

from .exceptions import CacheIncompleteError, ConfigError, DomainError
from .hilbert import DEFAULT_MAX_INDEX, PairedSample, coefficient_cache
from .validation import check_positive_float, check_positive_int

# Rejection loop guard for the term count; only reachable with tiny max_index
# and a large term-count rate.
_MAX_REDRAWS = 10_000


@dataclass(frozen=True)
class ProjectionDirection:
    """Sparse unit vector over 1-based basis indices."""

    indices: tuple
    weights: tuple

    def __post_init__(self):
        indices = tuple(int(i) for i in self.indices)
        weights = tuple(float(m) for m in self.weights)
        if len(indices) == 0 or len(indices) != len(weights):
            raise DomainError("a direction needs k >= 1 indices and as many weights")
        if indices[0] < 1 or any(a >= b for a, b in zip(indices, indices[1:])):
            raise DomainError(f"indices must be positive and strictly increasing: {indices}")
        if abs(sum(m * m for m in weights) - 1.0) > 1e-12:
            raise DomainError("direction weights must have unit Euclidean norm")
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "weights", weights)

    @property
    def k(self) -> int:
        return len(self.indices)

    def to_dict(self):
        return {"indices": list(self.indices), "weights": list(self.weights)}


@dataclass(frozen=True)
class DirectionSamplerConfig:
    """Rates of the two shifted Poisson laws and the basis truncation."""

    poisson_rate_nu1: float = 1.0
    poisson_rate_nu2: float = 1.0
    max_index: int = DEFAULT_MAX_INDEX

    def __post_init__(self):
        check_positive_float(self.poisson_rate_nu1, "poisson_rate_nu1")
        check_positive_float(self.poisson_rate_nu2, "poisson_rate_nu2")
        check_positive_int(self.max_index, "max_index")


@lru_cache(maxsize=16)
def _index_law(rate: float, max_index: int) -> np.ndarray:
    # P(index = i) for i = 1..max_index, shifted Poisson truncated and renormalized
    pmf = poisson.pmf(np.arange(max_index), rate)
    pmf = pmf / pmf.sum()
    pmf.setflags(write=False)
    return pmf


def _draw_without_replacement(rng, pmf: np.ndarray, k: int) -> list:
    """Successive draws from ``pmf`` with drawn atoms removed and mass renormalized."""
    remaining = pmf.copy()
    chosen = []
    for _ in range(k):
        cdf = np.cumsum(remaining)
        u = rng.random() * cdf[-1]
        atom = int(np.searchsorted(cdf, u, side="right"))
        # guard against u landing on the exact total or on a zero-mass tail
        atom = min(atom, len(cdf) - 1)
        while remaining[atom] == 0.0:
            atom -= 1
        chosen.append(atom)
        remaining[atom] = 0.0
    return chosen


def sample_direction(rng, config: DirectionSamplerConfig = DirectionSamplerConfig()) -> ProjectionDirection:
    """Draw one projection direction.

    ``rng`` must provide ``poisson``, ``random`` and ``standard_normal`` with
    the semantics of :class:`numpy.random.Generator`.
    """
    if not isinstance(config, DirectionSamplerConfig):
        raise ConfigError("config must be a DirectionSamplerConfig")
    pmf = _index_law(config.poisson_rate_nu2, config.max_index)
    available = int(np.count_nonzero(pmf))
    for _ in range(_MAX_REDRAWS):
        k = 1 + int(rng.poisson(config.poisson_rate_nu1))
        if k <= available:
            break
    else:
        raise ConfigError(
            f"could not draw a term count <= {available}; raise max_index or lower poisson_rate_nu1"
        )
    atoms = sorted(_draw_without_replacement(rng, pmf, k))
    m = np.asarray(rng.standard_normal(k), dtype=float)
    norm = np.sqrt(np.sum(m * m))
    while norm == 0.0:
        m = np.asarray(rng.standard_normal(k), dtype=float)
        norm = np.sqrt(np.sum(m * m))
    m = m / norm
    return ProjectionDirection(tuple(a + 1 for a in atoms), tuple(m.tolist()))


def sample_directions(rng, count: int, config: DirectionSamplerConfig = DirectionSamplerConfig()) -> list:
    """Draw ``count`` independent directions from one stream."""
    count = check_positive_int(count, "count")
    return [sample_direction(rng, config) for _ in range(count)]


def direction_arrays(directions) -> tuple[np.ndarray, np.ndarray]:
    """Pack directions as zero-padded ``(D, k_max)`` index (0-based) and weight arrays."""
    directions = list(directions)
    if not directions:
        raise DomainError("direction list is empty")
    k_max = max(d.k for d in directions)
    idx = np.zeros((len(directions), k_max), dtype=np.intp)
    w = np.zeros((len(directions), k_max))
    for row, d in enumerate(directions):
        idx[row, :d.k] = np.asarray(d.indices) - 1
        w[row, :d.k] = d.weights
    return idx, w


def _check_cache(cache: np.ndarray, needed: int):
    if cache.shape[-1] < needed:
        raise CacheIncompleteError(
            f"direction uses basis index {needed} but cache holds only {cache.shape[-1]}"
        )


def _resolve_cache(sample: PairedSample, cache, needed: int) -> np.ndarray:
    if cache is None:
        return coefficient_cache(sample, max(needed, 1))
    cache = np.asarray(cache, dtype=float)
    if cache.ndim != 3 or cache.shape[:2] != (sample.n, 2):
        raise CacheIncompleteError(
            f"cache shape {cache.shape} does not cover a sample of {sample.n} pairs"
        )
    _check_cache(cache, needed)
    return cache


def project_scores(cache: np.ndarray, directions) -> np.ndarray:
    """Projection scores for every direction, shape ``(D, n, 2)``.

    ``cache`` holds basis coefficients with shape ``(n, 2, max_index)``.
    """
    idx, w = direction_arrays(directions)
    cache = np.asarray(cache, dtype=float)
    _check_cache(cache, int(idx.max()) + 1)
    # elementwise products and a fixed-order reduction keep scores thread-invariant
    scores = np.sum(cache[:, :, idx] * w, axis=-1)
    return np.ascontiguousarray(np.moveaxis(scores, -1, 0))


def project_sample(sample: PairedSample, direction: ProjectionDirection, coefficient_cache=None) -> np.ndarray:
    """``n x 2`` score matrix ``s[j, i] = <x, X_{j,i}>`` for one direction."""
    cache = _resolve_cache(sample, coefficient_cache, max(direction.indices))
    return project_scores(cache, [direction])[0]
