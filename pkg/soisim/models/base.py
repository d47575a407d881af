"""Base class for source process models.

A process model describes a continuous Markov process started at X_0 = 0 whose
innovation X_t - E[X_t | X_s] is Gaussian and depends only on t - s. Concrete
models supply the conditional mean, the residual variance and an exact
transition sampler.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Union
import logging

import numpy as np

from soisim.errors import DomainError

logger = logging.getLogger('soisim')

ArrayLike = Union[float, np.ndarray]


class ProcessKind(str, Enum):
    WIENER_FAMILY = "wiener"
    ORNSTEIN_UHLENBECK = "ou"


@dataclass(frozen=True)
class ResidualSpec:
    """Parameters of X~_t = q * X~_s + R_t(s, tau).

    Attributes:
        q (float): The deterministic factor q_t(s).
        r_variance (float): Variance of the Gaussian residual R_t(s, tau).
    """
    q: float
    r_variance: float


class ProcessModel(ABC):
    """Abstract base class for source processes.
    
    All model implementations should inherit from this class and implement
    the required methods. ``mean_after`` and ``propagate`` accept arrays so the
    detection and decoding loops stay vectorized.
    """

    kind: ProcessKind

    @abstractmethod
    def mean_after(self, x: ArrayLike, elapsed: ArrayLike) -> ArrayLike:
        """E[X_{s+elapsed} | X_s = x]."""

    @abstractmethod
    def decay(self, elapsed: float) -> float:
        """The factor q_{s+elapsed}(s)."""

    @abstractmethod
    def residual_variance(self, elapsed: float) -> float:
        """Variance of X_{s+elapsed} - E[X_{s+elapsed} | X_s]."""

    @abstractmethod
    def exact_step(self, x: float, dt: float, gaussian_draw: float) -> float:
        """Draw X_{t+dt} given X_t = x from a standard-normal draw."""

    @abstractmethod
    def propagate(self, x0: float, draws: np.ndarray, dt: float) -> np.ndarray:
        """Apply ``exact_step`` along ``draws`` starting from ``x0``.

        Returns:
            np.ndarray: The value after each draw (same length as ``draws``).
        """

    @abstractmethod
    def parameters(self) -> Dict[str, float]:
        """Model parameters keyed by their config names."""

    def conditional_mean(self, x_at_tau: float, tau: float, t: float) -> float:
        """E[X_t | X_tau = x_at_tau] for t >= tau."""
        if t < tau:
            logger.error("conditional_mean requires t >= tau, got t=%s tau=%s", t, tau)
            raise DomainError(f"conditional_mean requires t >= tau, got t={t}, tau={tau}")
        return float(self.mean_after(x_at_tau, t - tau))

    def residual_spec(self, s: float, t: float, tau: float) -> ResidualSpec:
        """Decomposition parameters of X~_t = q_t(s) X~_s + R_t(s, tau)."""
        if not tau <= s <= t:
            logger.error("residual_spec requires tau <= s <= t, got tau=%s s=%s t=%s", tau, s, t)
            raise DomainError(f"residual_spec requires tau <= s <= t, got tau={tau}, s={s}, t={t}")
        elapsed = t - s
        return ResidualSpec(q=float(self.decay(elapsed)), r_variance=float(self.residual_variance(elapsed)))

    @staticmethod
    def _check_step(dt: float) -> None:
        if not dt > 0:
            logger.error("Transition step must be positive, got dt=%s", dt)
            raise DomainError(f"Transition step must be positive, got dt={dt}")


def conditional_mean(model: ProcessModel, x_at_tau: float, tau: float, t: float) -> float:
    """E[X_t | X_tau = x_at_tau, tau]."""
    return model.conditional_mean(x_at_tau, tau, t)


def exact_step(model: ProcessModel, x: float, dt: float, gaussian_draw: float) -> float:
    """One exact transition of ``model`` from ``x`` over ``dt``."""
    return model.exact_step(x, dt, gaussian_draw)


def residual_spec(model: ProcessModel, s: float, t: float, tau: float) -> ResidualSpec:
    """Residual decomposition of ``model`` between ``s`` and ``t``."""
    return model.residual_spec(s, t, tau)
