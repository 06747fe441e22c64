"""Estimator-style front end for the paired functional homogeneity test."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .hilbert import DEFAULT_MAX_INDEX, PairedSample
from .projection import DirectionSamplerConfig
from .resampling import ResamplingConfig, run_test
from .validation import check_paired


class PairedCvMTest(BaseEstimator):
    """Random-projection Cramér-von Mises test of marginal homogeneity.

    Tests whether the first and second components of paired curves share a
    common law, allowing arbitrary dependence inside each pair. Critical values
    come from a bootstrap and from within-pair permutation.

    Parameters
    ----------
    n_directions : int, default=500
        Random projection directions used to approximate the statistic.
    n_resamples : int, default=999
        Bootstrap and permutation replicates (each).
    alpha : float, default=0.05
        Significance level for the ``reject_*_`` flags.
    term_rate : float, default=1.0
        Poisson rate of the number of basis terms per direction (shifted by 1).
    index_rate : float, default=1.0
        Poisson rate of the basis index law (shifted by 1).
    max_index : int, default=50
        Highest basis index a direction may use.
    random_state : int or None, default=None
        Seed; ``None`` draws fresh entropy at ``fit`` time.
    n_jobs : int, default=1
        Threads for replicate evaluation. Results do not depend on it.

    Attributes
    ----------
    statistic_ : float
    pvalue_perm_, pvalue_boot_ : float
    reject_perm_, reject_boot_ : bool
    result_ : TestResult
    seed_ : int
        Seed actually used, so a ``random_state=None`` run can be replayed.

    Examples
    --------
    >>> import numpy as np
    >>> rng = np.random.default_rng(0)
    >>> X1 = rng.standard_normal((20, 51)).cumsum(axis=1) / 7
    >>> test = PairedCvMTest(n_directions=50, n_resamples=99, random_state=0)
    >>> test.fit(X1, X1).pvalue_perm_
    1.0
    """

    def __init__(self, n_directions=500, n_resamples=999, alpha=0.05, term_rate=1.0,
                 index_rate=1.0, max_index=DEFAULT_MAX_INDEX, random_state=None, n_jobs=1):
        self.n_directions = n_directions
        self.n_resamples = n_resamples
        self.alpha = alpha
        self.term_rate = term_rate
        self.index_rate = index_rate
        self.max_index = max_index
        self.random_state = random_state
        self.n_jobs = n_jobs

    def _config(self, seed):
        return ResamplingConfig(
            replicates=self.n_resamples,
            alpha=self.alpha,
            seed=seed,
            direction_count=self.n_directions,
            sampler=DirectionSamplerConfig(self.term_rate, self.index_rate, self.max_index),
        )

    def fit(self, X1, X2):
        """Run the test on curves ``X1[j]`` paired with ``X2[j]``.

        Both arrays have shape ``(n_pairs, n_grid_points)`` with values on a
        uniform grid of [0, 1].
        """
        X1, X2 = check_paired(X1, X2)
        if self.random_state is None:
            seed = int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
        else:
            seed = int(self.random_state)
        config = self._config(seed)
        self.result_ = run_test(PairedSample.from_arrays(X1, X2), config, n_jobs=self.n_jobs)
        self.seed_ = seed
        self.n_features_in_ = X1.shape[1]
        self.statistic_ = self.result_.observed
        self.pvalue_perm_ = self.result_.p_perm
        self.pvalue_boot_ = self.result_.p_boot
        self.reject_perm_ = self.result_.reject_perm
        self.reject_boot_ = self.result_.reject_boot
        return self

    def test(self, X1, X2):
        """Fit and return the :class:`TestResult`."""
        return self.fit(X1, X2).result_

    def decision(self, method="perm"):
        """Reject flag of the fitted test for ``"perm"`` or ``"boot"``."""
        check_is_fitted(self, "result_")
        if method == "perm":
            return self.reject_perm_
        if method == "boot":
            return self.reject_boot_
        raise ValueError(f"method must be 'perm' or 'boot', got {method!r}")
