"""Experiment orchestration: reproducible Monte Carlo runs, gates, CLI."""

from .config import ExperimentConfig, TestResult
from .experiments import (
    baseline_uniform,
    compare_123_location,
    mc_fp_mean_231,
    mc_fp_profile_123,
    mc_joint_231,
    run_enumeration_suite,
)
from .stats import chi_squared_uniform_pvalue, ks_statistic

__all__ = [
    "ExperimentConfig",
    "TestResult",
    "run_enumeration_suite",
    "mc_fp_mean_231",
    "mc_fp_profile_123",
    "mc_joint_231",
    "baseline_uniform",
    "compare_123_location",
    "ks_statistic",
    "chi_squared_uniform_pvalue",
]
