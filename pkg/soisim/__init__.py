"""soisim - Causal rate-constrained sampling with sign-of-innovation codes

This package simulates Wiener-family and Ornstein-Uhlenbeck sources, samples them
with symmetric threshold policies, encodes the samples with one-bit SOI codewords
and compares the MMSE reconstruction with closed-form distortion-rate functions.
"""

from .models.wiener import WienerFamily
from .models.ornstein_uhlenbeck import OrnsteinUhlenbeck
from .policies.base import ConstantThreshold, ElapsedTimeThreshold, UniformSchedule
from .core.config import ExperimentConfig, load_config
from .core.harness import ExperimentHarness, run_trials
from .evaluators import DiagnosticsEvaluator


__version__ = "0.0.a1.dev1"
__all__ = ["WienerFamily", "OrnsteinUhlenbeck", "ConstantThreshold", "ElapsedTimeThreshold", "UniformSchedule",
           "ExperimentConfig", "load_config", "ExperimentHarness", "run_trials", "DiagnosticsEvaluator"]
