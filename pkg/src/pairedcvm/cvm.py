"""Projected two-sample Cramér-von Mises distances.

For one direction the pooled empirical measure puts mass ``1/(2n)`` on each
of the ``2n`` projection scores, so the distance reduces to a finite sum

    D_n = (1/2) * sum over pooled atoms a of [F_1(a) - F_2(a)]^2.

Writing ``delta[a, j] = 1{s[j,0] <= a} - 1{s[j,1] <= a}`` gives
``F_1(a) - F_2(a) = sum_j delta[a, j] / n``. Everything downstream (observed
statistic, permutation and bootstrap replicates) is an integer combination of
``delta``, so statistics are computed as exact integers and scaled once at
the end.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DomainError
from .hilbert import PairedSample
from .projection import _resolve_cache, direction_arrays, project_scores

__all__ = [
    "PairedSample",
    "atom_differences",
    "cvm_distance",
    "cvm_statistic",
    "empirical_cdf",
    "scale_statistic",
]


def empirical_cdf(scores, r: float) -> float:
    """Fraction of ``scores`` that are ``<= r``."""
    scores = np.asarray(scores, dtype=float).ravel()
    if scores.size == 0:
        raise DomainError("empirical CDF of an empty sample")
    return np.count_nonzero(scores <= r) / scores.size


def _check_scores(scores) -> np.ndarray:
    scores = np.asarray(scores, dtype=float)
    if scores.ndim < 2 or scores.shape[-1] != 2 or scores.shape[-2] < 1:
        raise DomainError(f"score matrix must have shape (n, 2), got {scores.shape}")
    if not np.all(np.isfinite(scores)):
        raise DomainError("projection scores must be finite")
    return scores


def atom_differences(scores) -> np.ndarray:
    """Signed indicator differences at the pooled atoms.

    Parameters
    ----------
    scores : array of shape (..., n, 2)
        Projection scores, one ``n x 2`` matrix per leading index.

    Returns
    -------
    delta : int8 array of shape (..., 2n, n)
        ``delta[..., a, j] = 1{s[j,0] <= atom_a} - 1{s[j,1] <= atom_a}`` with
        atoms ordered as ``scores[..., j, i]`` flattened row-major.
    """
    scores = _check_scores(scores)
    n = scores.shape[-2]
    atoms = scores.reshape(scores.shape[:-2] + (2 * n,))
    below = scores[..., None, :, :] <= atoms[..., :, None, None]
    return below[..., 0].astype(np.int8) - below[..., 1].astype(np.int8)


def scale_statistic(total, n: int, direction_count: int = 1):
    """Turn an integer sum of squared atom differences into ``D_n`` units."""
    return np.asarray(total, dtype=float) / (2.0 * n * n * direction_count)


def _integer_distance_sums(delta: np.ndarray) -> np.ndarray:
    diffs = delta.sum(axis=-1, dtype=np.int64)
    return np.sum(diffs * diffs, axis=-1)


def cvm_distance(scores) -> float:
    """Two-sample Cramér-von Mises distance ``D_n`` of one ``n x 2`` score matrix."""
    scores = _check_scores(scores)
    if scores.ndim != 2:
        raise DomainError(f"expected a single (n, 2) score matrix, got {scores.shape}")
    n = scores.shape[0]
    return float(scale_statistic(int(_integer_distance_sums(atom_differences(scores))), n))


def cvm_statistic(sample: PairedSample, directions, coefficient_cache=None) -> float:
    """Mean of ``D_n`` over ``directions`` (Monte Carlo value of ``CvM_n``)."""
    directions = list(directions)
    if not directions:
        raise DomainError("direction list is empty")
    idx, _ = direction_arrays(directions)
    cache = _resolve_cache(sample, coefficient_cache, int(idx.max()) + 1)
    delta = atom_differences(project_scores(cache, directions))
    total = int(_integer_distance_sums(delta).sum())
    return float(scale_statistic(total, sample.n, len(directions)))
