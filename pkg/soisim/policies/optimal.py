"""Optimal symmetric thresholds for the two solved process families."""

import logging
import math

from .base import ConstantThreshold
from soisim.analytics.ou_rates import OuRateFunctions
from soisim.errors import DomainError, UnsupportedModelError
from soisim.models.base import ProcessKind, ProcessModel

logger = logging.getLogger('soisim')


def wiener_optimal_threshold(c: float, a_scale: float, frequency: float) -> float:
    """|c| * sqrt(a / F), constant in the elapsed time."""
    if not (frequency > 0 and a_scale > 0):
        logger.error("Wiener threshold needs F > 0 and a > 0, got F=%s a=%s", frequency, a_scale)
        raise DomainError(f"F and a must be positive, got F={frequency}, a={a_scale}")
    return abs(c) * math.sqrt(a_scale / frequency)


def ou_optimal_threshold(theta: float, sigma: float, rate: float) -> float:
    """sqrt(R1^-1(1/R)) for the OU process."""
    return OuRateFunctions(theta, sigma).optimal_threshold(rate)


def optimal_policy(model: ProcessModel, rate: float) -> ConstantThreshold:
    """Resolve "optimal-for-rate R" into the model's optimal constant threshold."""
    if model.kind is ProcessKind.WIENER_FAMILY:
        return ConstantThreshold(wiener_optimal_threshold(model.c, model.a, rate))
    elif model.kind is ProcessKind.ORNSTEIN_UHLENBECK:
        return ConstantThreshold(ou_optimal_threshold(model.theta, model.sigma, rate))
    raise UnsupportedModelError(f"No optimal threshold is known for {model.kind}")
