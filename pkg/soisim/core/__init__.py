"""Core package for soisim.

This package contains the experiment configuration, the Monte Carlo harness
and the sweeps built on it.
"""

from .config import ExperimentConfig, Mode, PolicySource, load_config, config_from_mapping, parse_config_text
from .report import ExperimentReport, mean_with_half_width
from .harness import ExperimentHarness, TrialResult, run_trials, run_trial, analytic_reference
from .sweep import drf_sweep, horizon_sensitivity, dt_refinement

__all__ = [
    "ExperimentConfig",
    "Mode",
    "PolicySource",
    "load_config",
    "config_from_mapping",
    "parse_config_text",
    "ExperimentReport",
    "mean_with_half_width",
    "ExperimentHarness",
    "TrialResult",
    "run_trials",
    "run_trial",
    "analytic_reference",
    "drf_sweep",
    "horizon_sensitivity",
    "dt_refinement",
]
