"""Policies package for soisim.

This package contains the sampling policies and stopping-time detection.
"""

from .base import PolicyKind, ThresholdPolicy, ConstantThreshold, ElapsedTimeThreshold, UniformSchedule, ThresholdTable
from .detection import (
    ExitScanner,
    ResetRule,
    StoppingRecord,
    detect_stopping_times,
    empirical_frequency,
    reconstructed_sample,
)
from .optimal import optimal_policy, ou_optimal_threshold, wiener_optimal_threshold

__all__ = [
    "PolicyKind",
    "ThresholdPolicy",
    "ConstantThreshold",
    "ElapsedTimeThreshold",
    "UniformSchedule",
    "ThresholdTable",
    "ExitScanner",
    "ResetRule",
    "StoppingRecord",
    "detect_stopping_times",
    "empirical_frequency",
    "reconstructed_sample",
    "optimal_policy",
    "ou_optimal_threshold",
    "wiener_optimal_threshold",
]
