"""Wiener-family process X_t = c * W_{a t} + b t."""

from dataclasses import dataclass
from typing import Dict
import logging
import math

import numpy as np

from .base import ArrayLike, ProcessKind, ProcessModel
from soisim.errors import DomainError

logger = logging.getLogger('soisim')


@dataclass(frozen=True)
class WienerFamily(ProcessModel):
    """Scaled, time-changed Wiener process with linear drift.

    Attributes:
        c (float): Scale g1(t) = c.
        a (float): Time scale, g2(t) = a t. Must be positive.
        b (float): Drift rate, g3(t) = b t.
    """
    c: float = 1.0
    a: float = 1.0
    b: float = 0.0

    kind = ProcessKind.WIENER_FAMILY

    def __post_init__(self):
        if not self.a > 0:
            logger.error("Wiener time scale must be positive, got a=%s", self.a)
            raise DomainError(f"Wiener time scale must be positive, got a={self.a}")

    def mean_after(self, x: ArrayLike, elapsed: ArrayLike) -> ArrayLike:
        return x + self.b * elapsed

    def decay(self, elapsed: float) -> float:
        return 1.0

    def residual_variance(self, elapsed: float) -> float:
        return self.c * self.c * self.a * elapsed

    def exact_step(self, x: float, dt: float, gaussian_draw: float) -> float:
        self._check_step(dt)
        return x + self.b * dt + self.c * math.sqrt(self.a * dt) * gaussian_draw

    def propagate(self, x0: float, draws: np.ndarray, dt: float) -> np.ndarray:
        self._check_step(dt)
        increments = self.b * dt + self.c * math.sqrt(self.a * dt) * np.asarray(draws, dtype=float)
        return x0 + np.cumsum(increments)

    def parameters(self) -> Dict[str, float]:
        return {"c": self.c, "a": self.a, "b": self.b}
