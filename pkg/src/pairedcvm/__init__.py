"""Paired functional data: random-projection Cramér-von Mises tests of
marginal homogeneity with bootstrap and permutation calibration."""

__version__ = "0.1.0"

from .cvm import cvm_distance, cvm_statistic, empirical_cdf
from .estimator import PairedCvMTest
from .hilbert import (FunctionSample, Grid, LegendreBasis, PairedSample, basis_coefficients,
                      coefficient_cache, inner_product, legendre_eval)
from .ingest import IncrementCurves, SegmentationConfig, TimeSeries, pair_curves, to_curves
from .projection import (DirectionSamplerConfig, ProjectionDirection, project_sample,
                         sample_direction, sample_directions)
from .resampling import (ResamplingConfig, TestResult, bootstrap_statistic,
                         exact_permutation_pvalue, permutation_statistic, run_test)
from .simulate import (ScenarioConfig, StudyReport, empirical_rejection_rate, generate_sample,
                       simulate_bridge_pair)

__all__ = [
    "DirectionSamplerConfig", "FunctionSample", "Grid", "IncrementCurves", "LegendreBasis",
    "PairedCvMTest", "PairedSample", "ProjectionDirection", "ResamplingConfig",
    "ScenarioConfig", "SegmentationConfig", "StudyReport", "TestResult", "TimeSeries",
    "basis_coefficients", "bootstrap_statistic", "coefficient_cache", "cvm_distance",
    "cvm_statistic", "empirical_cdf", "empirical_rejection_rate", "exact_permutation_pvalue",
    "generate_sample", "inner_product", "legendre_eval", "pair_curves", "permutation_statistic",
    "project_sample", "run_test", "sample_direction", "sample_directions",
    "simulate_bridge_pair", "to_curves",
]
