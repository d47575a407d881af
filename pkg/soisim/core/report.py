"""Experiment reports."""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple
import json
import logging
import math

import numpy as np
from scipy.stats import norm

logger = logging.getLogger('soisim')

CONFIDENCE = 0.95


def mean_with_half_width(values: Sequence[float], confidence: float = CONFIDENCE) -> Tuple[float, float]:
    """Sample mean and the normal-approximation CI half-width across trials.

    A single value has no spread estimate; its half-width is reported as 0.
    """
    values = np.asarray(values, dtype=float)
    mean = float(np.mean(values))
    if len(values) < 2:
        return mean, 0.0
    z = float(norm.ppf(0.5 + confidence / 2.0))
    return mean, z * float(np.std(values, ddof=1)) / math.sqrt(len(values))


@dataclass(frozen=True)
class ExperimentReport:
    """Aggregated outcome of ``run_trials``.

    Attributes:
        trials (int): Number of trials aggregated.
        mode (str): Experiment mode.
        empirical_rate (float): Mean bits (or analog samples) per second.
        rate_half_width (float): 95% CI half-width of the rate.
        empirical_mse (float): Mean time-averaged squared error (control cost in control mode).
        mse_half_width (float): 95% CI half-width of the MSE.
        analytic_reference (float, optional): Closed-form distortion for the policy.
        analytic_rate (float, optional): Closed-form rate or frequency for the policy.
        analytic_source (str, optional): "optimal", "threshold" or "uniform".
        diagnostics (Dict[str, float]): Named diagnostic values.
        degenerate_ci (bool): Set when a single trial makes the CI meaningless.
        per_trial_rate (Tuple[float, ...]): Rates in trial order.
        per_trial_mse (Tuple[float, ...]): MSEs in trial order.
    """
    trials: int
    mode: str
    empirical_rate: float
    rate_half_width: float
    empirical_mse: float
    mse_half_width: float
    analytic_reference: Optional[float] = None
    analytic_rate: Optional[float] = None
    analytic_source: Optional[str] = None
    diagnostics: Dict[str, float] = field(default_factory=dict)
    degenerate_ci: bool = False
    per_trial_rate: Tuple[float, ...] = ()
    per_trial_mse: Tuple[float, ...] = ()

    @property
    def rate_interval(self) -> Tuple[float, float]:
        return self.empirical_rate - self.rate_half_width, self.empirical_rate + self.rate_half_width

    @property
    def mse_interval(self) -> Tuple[float, float]:
        return self.empirical_mse - self.mse_half_width, self.empirical_mse + self.mse_half_width

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["per_trial_rate"] = list(self.per_trial_rate)
        data["per_trial_mse"] = list(self.per_trial_mse)
        return data

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def summary(self) -> str:
        """One-line human-readable summary."""
        text = (f"rate {self.empirical_rate:.6g} ± {self.rate_half_width:.2g} b/s, "
                f"mse {self.empirical_mse:.6g} ± {self.mse_half_width:.2g} over {self.trials} trial(s)")
        if self.analytic_reference is not None:
            text += f", analytic {self.analytic_source} {self.analytic_reference:.6g}"
        return text
