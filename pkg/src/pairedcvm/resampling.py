"""Bootstrap and within-pair permutation calibration of the projected
Cramér-von Mises statistic.

One set of directions is drawn per test and shared by the observed statistic
and every replicate. Replicates are evaluated in blocks as integer matrix
products against the atom-difference array of :mod:`pairedcvm.cvm`; the
products are carried in float64 but only ever hold small integers, so they
are exact and independent of BLAS threading.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field

import numpy as np
from joblib import Parallel, delayed

from .cvm import atom_differences, scale_statistic
from .exceptions import ConfigError, DegenerateSampleError, DomainError
from .hilbert import PairedSample, coefficient_cache
from .projection import (
    DirectionSamplerConfig,
    _resolve_cache,
    direction_arrays,
    project_scores,
    sample_directions,
)
from .validation import check_alpha, check_positive_int

# spawn-key tags for derived random streams
DIRECTION_STREAM = 0
BOOTSTRAP_STREAM = 1
PERMUTATION_STREAM = 2

# upper bound on float64 entries materialized per replicate block
_BLOCK_ENTRIES = 1 << 22


def derived_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for the stream identified by ``(seed, *key)``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


@dataclass(frozen=True)
class ResamplingConfig:
    """Monte Carlo budget and decision level for one test."""

    replicates: int = 999
    alpha: float = 0.05
    seed: int = 0
    direction_count: int = 500
    sampler: DirectionSamplerConfig = field(default_factory=DirectionSamplerConfig)

    def __post_init__(self):
        check_positive_int(self.replicates, "replicates")
        check_positive_int(self.direction_count, "direction_count")
        check_alpha(self.alpha)
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) \
                or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an integer in [0, 2**64), got {self.seed!r}")
        if not isinstance(self.sampler, DirectionSamplerConfig):
            raise ConfigError("sampler must be a DirectionSamplerConfig")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True, eq=False)
class TestResult:
    """Observed statistic, replicate distributions and Monte Carlo p-values."""

    __test__ = False  # keep pytest from collecting this class

    observed: float
    boot_stats: np.ndarray
    perm_stats: np.ndarray
    p_boot: float
    p_perm: float
    reject_boot: bool
    reject_perm: bool
    n: int
    config: ResamplingConfig

    def to_dict(self, include_replicates=False):
        out = {
            "n": self.n,
            "observed": self.observed,
            "p_perm": self.p_perm,
            "p_boot": self.p_boot,
            "reject_perm": self.reject_perm,
            "reject_boot": self.reject_boot,
            "config": self.config.to_dict(),
        }
        if include_replicates:
            out["boot_stats"] = self.boot_stats.tolist()
            out["perm_stats"] = self.perm_stats.tolist()
        return out

    def __eq__(self, other):
        if not isinstance(other, TestResult):
            return NotImplemented
        return (self.observed == other.observed and self.n == other.n
                and self.p_boot == other.p_boot and self.p_perm == other.p_perm
                and self.reject_boot == other.reject_boot
                and self.reject_perm == other.reject_perm
                and self.config == other.config
                and np.array_equal(self.boot_stats, other.boot_stats)
                and np.array_equal(self.perm_stats, other.perm_stats))


def _blocks(delta: np.ndarray, count: int):
    block = max(1, _BLOCK_ENTRIES // max(1, delta.shape[0] * delta.shape[1]))
    for start in range(0, count, block):
        yield slice(start, min(count, start + block))


def observed_total(delta: np.ndarray) -> int:
    """Integer numerator of the observed statistic summed over directions."""
    diffs = delta.sum(axis=-1, dtype=np.int64)
    return int(np.sum(diffs * diffs))


def permutation_totals(delta: np.ndarray, swaps) -> np.ndarray:
    """Integer numerators of permutation replicates.

    Parameters
    ----------
    delta : int8 array (D, 2n, n)
        Atom differences of the original sample.
    swaps : bool array (B, n)
        ``swaps[b, j]`` exchanges the two components of pair ``j``.
    """
    swaps = np.atleast_2d(np.asarray(swaps, dtype=bool))
    n = delta.shape[-1]
    if swaps.shape[1] != n:
        raise DomainError(f"swap vectors must have length {n}")
    # a swap flips the sign of the pair's column; the pooled atoms are unchanged
    signs = 1.0 - 2.0 * swaps
    flat = delta.reshape(-1, n).astype(np.float64)
    out = np.empty(swaps.shape[0], dtype=np.int64)
    for sl in _blocks(delta, swaps.shape[0]):
        diff = flat @ signs[sl].T
        out[sl] = np.rint(np.sum(diff * diff, axis=0)).astype(np.int64)
    return out


def bootstrap_totals(delta: np.ndarray, counts) -> np.ndarray:
    """Integer numerators of bootstrap replicates.

    ``counts[b, j]`` is how often pair ``j`` appears in resample ``b``. With
    ``w = counts[b]`` the centered difference at original atom ``a`` is
    ``delta[a] @ (w - 1) / n`` and atom ``(j, i)`` carries multiplicity
    ``w[j]`` in the resampled pooled measure.
    """
    counts = np.atleast_2d(np.asarray(counts, dtype=np.int64))
    n = delta.shape[-1]
    if counts.shape[1] != n:
        raise DomainError(f"count vectors must have length {n}")
    flat = delta.reshape(-1, n).astype(np.float64)
    centered = (counts - 1).astype(np.float64)
    atom_weight = np.repeat(counts.T, 2, axis=0).astype(np.float64)  # (2n, B)
    out = np.empty(counts.shape[0], dtype=np.int64)
    for sl in _blocks(delta, counts.shape[0]):
        diff = (flat @ centered[sl].T).reshape(delta.shape[0], 2 * n, -1)
        per_atom = np.sum(diff * diff, axis=0)
        out[sl] = np.rint(np.sum(per_atom * atom_weight[:, sl], axis=0)).astype(np.int64)
    return out


def _sample_delta(sample: PairedSample, directions, coefficient_cache):
    directions = list(directions)
    if not directions:
        raise DomainError("direction list is empty")
    idx, _ = direction_arrays(directions)
    cache = _resolve_cache(sample, coefficient_cache, int(idx.max()) + 1)
    return atom_differences(project_scores(cache, directions)), len(directions)


def bootstrap_statistic(sample: PairedSample, directions, rng=None, coefficient_cache=None,
                        *, indices=None) -> float:
    """One bootstrap replicate ``CvM*_n``.

    Pairs are resampled with replacement using ``rng`` unless explicit
    0-based ``indices`` are given.
    """
    n = sample.n
    if indices is None:
        if rng is None:
            raise ConfigError("either rng or indices is required")
        indices = rng.integers(0, n, size=n)
    indices = np.asarray(indices, dtype=np.intp)
    if indices.shape != (n,) or indices.min() < 0 or indices.max() >= n:
        raise DomainError(f"bootstrap indices must be {n} values in [0, {n})")
    delta, d = _sample_delta(sample, directions, coefficient_cache)
    total = bootstrap_totals(delta, np.bincount(indices, minlength=n)[None, :])[0]
    return float(scale_statistic(total, n, d))


def permutation_statistic(sample: PairedSample, directions, rng=None, coefficient_cache=None,
                          *, swaps=None) -> float:
    """One within-pair permutation replicate ``CvM^pi_n``.

    Each pair is swapped with probability 1/2 using ``rng`` unless an explicit
    boolean ``swaps`` vector is given.
    """
    n = sample.n
    if swaps is None:
        if rng is None:
            raise ConfigError("either rng or swaps is required")
        swaps = rng.integers(0, 2, size=n).astype(bool)
    swaps = np.asarray(swaps, dtype=bool)
    if swaps.shape != (n,):
        raise DomainError(f"swaps must have length {n}")
    delta, d = _sample_delta(sample, directions, coefficient_cache)
    total = permutation_totals(delta, swaps[None, :])[0]
    return float(scale_statistic(total, n, d))


def _draw_counts(seed, n, replicates):
    counts = np.empty((len(replicates), n), dtype=np.int64)
    for row, b in enumerate(replicates):
        idx = derived_rng(seed, BOOTSTRAP_STREAM, b).integers(0, n, size=n)
        counts[row] = np.bincount(idx, minlength=n)
    return counts


def _draw_swaps(seed, n, replicates):
    swaps = np.empty((len(replicates), n), dtype=bool)
    for row, b in enumerate(replicates):
        swaps[row] = derived_rng(seed, PERMUTATION_STREAM, b).integers(0, 2, size=n).astype(bool)
    return swaps


def _replicate_chunk(delta, seed, replicates):
    n = delta.shape[-1]
    boot = bootstrap_totals(delta, _draw_counts(seed, n, replicates))
    perm = permutation_totals(delta, _draw_swaps(seed, n, replicates))
    return boot, perm


def monte_carlo_pvalue(observed_total_: int, replicate_totals) -> float:
    """``(1 + #{replicate >= observed}) / (B + 1)``."""
    replicate_totals = np.asarray(replicate_totals)
    exceed = int(np.count_nonzero(replicate_totals >= observed_total_))
    return (1 + exceed) / (replicate_totals.size + 1)


def run_test(sample: PairedSample, config: ResamplingConfig = ResamplingConfig(), *,
             n_jobs: int = 1, directions=None) -> TestResult:
    """Bootstrap and permutation test of marginal homogeneity.

    Parameters
    ----------
    sample : PairedSample
        At least two pairs of curves.
    config : ResamplingConfig
        Replicate count, level, seed and direction budget.
    n_jobs : int, default=1
        Worker threads for replicate blocks. Output does not depend on it.
    directions : list of ProjectionDirection, optional
        Use these instead of drawing ``config.direction_count`` directions.

    Returns
    -------
    TestResult
    """
    if not isinstance(config, ResamplingConfig):
        raise ConfigError("config must be a ResamplingConfig")
    n = sample.n
    if n < 2:
        raise DegenerateSampleError(f"need at least 2 pairs, got {n}")
    if directions is None:
        directions = sample_directions(derived_rng(config.seed, DIRECTION_STREAM),
                                       config.direction_count, config.sampler)
    directions = list(directions)
    cache = coefficient_cache(sample, config.sampler.max_index)
    delta, d = _sample_delta(sample, directions, cache)
    obs = observed_total(delta)

    B = config.replicates
    n_chunks = max(1, min(int(n_jobs), B))
    bounds = np.linspace(0, B, n_chunks + 1).astype(int)
    chunks = [range(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    if len(chunks) == 1:
        parts = [_replicate_chunk(delta, config.seed, chunks[0])]
    else:
        parts = Parallel(n_jobs=len(chunks), prefer="threads")(
            delayed(_replicate_chunk)(delta, config.seed, c) for c in chunks)
    boot = np.concatenate([p[0] for p in parts])
    perm = np.concatenate([p[1] for p in parts])

    p_boot = monte_carlo_pvalue(obs, boot)
    p_perm = monte_carlo_pvalue(obs, perm)
    return TestResult(
        observed=float(scale_statistic(obs, n, d)),
        boot_stats=scale_statistic(boot, n, d),
        perm_stats=scale_statistic(perm, n, d),
        p_boot=p_boot,
        p_perm=p_perm,
        reject_boot=bool(p_boot <= config.alpha),
        reject_perm=bool(p_perm <= config.alpha),
        n=n,
        config=config,
    )


def exact_permutation_pvalue(sample: PairedSample, directions, coefficient_cache=None) -> float:
    """Permutation p-value over all ``2**n`` swap vectors, ``#{stat >= observed} / 2**n``.

    Feasible for ``n`` up to about 16.
    """
    n = sample.n
    if n > 20:
        raise DomainError(f"exhaustive enumeration over 2**{n} swap vectors is not supported")
    delta, _ = _sample_delta(sample, directions, coefficient_cache)
    swaps = np.array(list(itertools.product((False, True), repeat=n)), dtype=bool)
    totals = permutation_totals(delta, swaps)
    return int(np.count_nonzero(totals >= observed_total(delta))) / swaps.shape[0]
