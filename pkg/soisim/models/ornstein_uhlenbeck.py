"""Ornstein-Uhlenbeck process dX_t = theta (mu - X_t) dt + sigma dW_t, X_0 = 0."""

from dataclasses import dataclass
from typing import Dict
import logging
import math

import numpy as np
from scipy.signal import lfilter

from .base import ArrayLike, ProcessKind, ProcessModel
from soisim.errors import DomainError

logger = logging.getLogger('soisim')


@dataclass(frozen=True)
class OrnsteinUhlenbeck(ProcessModel):
    """Mean-reverting Gaussian process.

    Attributes:
        theta (float): Mean-reversion rate per second. Must be positive.
        mu (float): Long-run mean.
        sigma (float): Volatility. Must be positive.
    """
    theta: float = 1.0
    mu: float = 0.0
    sigma: float = 1.0

    kind = ProcessKind.ORNSTEIN_UHLENBECK

    def __post_init__(self):
        if not (self.theta > 0 and self.sigma > 0):
            logger.error("OU parameters must be positive, got theta=%s sigma=%s", self.theta, self.sigma)
            raise DomainError(f"OU requires theta > 0 and sigma > 0, got theta={self.theta}, sigma={self.sigma}")

    def mean_after(self, x: ArrayLike, elapsed: ArrayLike) -> ArrayLike:
        return self.mu + (x - self.mu) * np.exp(-self.theta * elapsed)

    def decay(self, elapsed: float) -> float:
        return math.exp(-self.theta * elapsed)

    def residual_variance(self, elapsed: float) -> float:
        return self.sigma ** 2 * -math.expm1(-2.0 * self.theta * elapsed) / (2.0 * self.theta)

    def _step_coefficients(self, dt: float):
        self._check_step(dt)
        return math.exp(-self.theta * dt), math.sqrt(self.residual_variance(dt))

    def exact_step(self, x: float, dt: float, gaussian_draw: float) -> float:
        phi, scale = self._step_coefficients(dt)
        return self.mu + (x - self.mu) * phi + scale * gaussian_draw

    def propagate(self, x0: float, draws: np.ndarray, dt: float) -> np.ndarray:
        # AR(1) recursion on the deviation from mu, run as an IIR filter
        phi, scale = self._step_coefficients(dt)
        deviation, _ = lfilter([scale], [1.0, -phi], np.asarray(draws, dtype=float), zi=[phi * (x0 - self.mu)])
        return self.mu + deviation

    def parameters(self) -> Dict[str, float]:
        return {"theta": self.theta, "mu": self.mu, "sigma": self.sigma}
