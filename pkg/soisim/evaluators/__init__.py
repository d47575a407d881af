"""Evaluators package for soisim.

This package contains the diagnostics computed over experiment output.
"""

from .diagnostics import (
    DiagnosticsEvaluator,
    DynkinRefinement,
    DynkinResult,
    IntervalDiagnostic,
    dynkin_check,
    dynkin_refinement,
    iid_interval_diagnostic,
    renewal_ratio,
)

__all__ = [
    "DiagnosticsEvaluator",
    "DynkinRefinement",
    "DynkinResult",
    "IntervalDiagnostic",
    "dynkin_check",
    "dynkin_refinement",
    "iid_interval_diagnostic",
    "renewal_ratio",
]
