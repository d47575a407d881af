"""Sampling policies.

A sampling policy is either a symmetric threshold rule (sample when the
innovation leaves (-a, a), with a constant or a function of the time elapsed
since the last sample) or a deterministic uniform schedule.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Union
import logging

import numpy as np

from soisim.errors import DomainError, UnsupportedPolicyError

logger = logging.getLogger('soisim')


class PolicyKind(str, Enum):
    CONSTANT_THRESHOLD = "constant"
    ELAPSED_TIME_THRESHOLD = "elapsed_time"
    UNIFORM_SCHEDULE = "uniform"


class ThresholdPolicy(ABC):
    """Abstract base class for sampling policies."""

    kind: PolicyKind

    @property
    def is_threshold(self) -> bool:
        """True for symmetric threshold rules, False for schedules."""
        return self.kind is not PolicyKind.UNIFORM_SCHEDULE

    @abstractmethod
    def threshold_at(self, elapsed: np.ndarray) -> Union[float, np.ndarray]:
        """Threshold a(t - tau_i) at the given elapsed times."""


@dataclass(frozen=True)
class ConstantThreshold(ThresholdPolicy):
    """Sample when |innovation| >= a."""
    a: float

    kind = PolicyKind.CONSTANT_THRESHOLD

    def __post_init__(self):
        if not self.a >= 0:
            logger.error("Threshold must be non-negative, got %s", self.a)
            raise DomainError(f"Threshold must be non-negative, got {self.a}")

    def threshold_at(self, elapsed: np.ndarray) -> float:
        return self.a


class ElapsedTimeThreshold(ThresholdPolicy):
    """Sample when |innovation| >= a(t - tau_i).

    The threshold function must be non-negative and may only jump downward
    where it is right-continuous. The constructor samples it on
    [0, check_span) with spacing ``check_step``, rejects negative values, and
    bisects every drop between consecutive samples down to neighbouring
    floats. A drop larger than 1e-9 that survives the bisection is a jump; it
    is rejected when the function keeps its upper value at the jump point.
    The jump point is whichever of the two neighbouring floats has the shorter
    decimal form; when neither is shorter the jump is taken as right-continuous.
    """

    kind = PolicyKind.ELAPSED_TIME_THRESHOLD

    JUMP_TOL = 1e-9
    MAX_BISECTIONS = 1100

    def __init__(self, a_of_elapsed: Callable[[float], float], check_span: float = 10.0, check_step: float = 1e-3):
        self.a_of_elapsed = a_of_elapsed
        self._vectorized = np.vectorize(a_of_elapsed, otypes=[float])

        grid = np.arange(0.0, check_span, check_step)
        values = self._vectorized(grid)
        if np.any(values < 0) or np.any(np.isnan(values)):
            logger.error("Elapsed-time threshold takes negative or NaN values on [0, %s)", check_span)
            raise DomainError("Elapsed-time threshold must be non-negative")

        falling = np.flatnonzero(values[1:] < values[:-1] - self.JUMP_TOL)
        if falling.size:
            self._check_drops(grid[falling], grid[falling + 1], values[falling], values[falling + 1])

    def _check_drops(self, lo: np.ndarray, hi: np.ndarray, f_lo: np.ndarray, f_hi: np.ndarray) -> None:
        """Narrow each bracket (lo, hi) onto the largest drop inside it."""
        for _ in range(self.MAX_BISECTIONS):
            open_ = (f_lo - f_hi > self.JUMP_TOL) & (hi > np.nextafter(lo, np.inf))
            if not open_.any():
                break
            mid = np.where(open_, 0.5 * (lo + hi), lo)
            f_mid = self._vectorized(mid)
            left = open_ & (f_lo - f_mid >= f_mid - f_hi)
            right = open_ & ~left
            hi, f_hi = np.where(left, mid, hi), np.where(left, f_mid, f_hi)
            lo, f_lo = np.where(right, mid, lo), np.where(right, f_mid, f_lo)

        jumps = f_lo - f_hi > self.JUMP_TOL
        for a, b, upper in zip(lo[jumps], hi[jumps], f_lo[jumps]):
            # a and b are neighbouring floats
            if len(repr(float(a))) < len(repr(float(b))):
                logger.error("Elapsed-time threshold keeps %s at t=%s and drops right after", upper, a)
                raise DomainError(f"Elapsed-time threshold has a left-continuous downward jump at t={a}")

    def threshold_at(self, elapsed: np.ndarray) -> np.ndarray:
        return self._vectorized(elapsed)

    def __repr__(self) -> str:
        return f"ElapsedTimeThreshold({getattr(self.a_of_elapsed, '__name__', 'a')})"


@dataclass(frozen=True)
class UniformSchedule(ThresholdPolicy):
    """Sample at t = i * period regardless of the path."""
    period: float

    kind = PolicyKind.UNIFORM_SCHEDULE

    def __post_init__(self):
        if not self.period > 0:
            logger.error("Uniform period must be positive, got %s", self.period)
            raise DomainError(f"Uniform period must be positive, got {self.period}")

    @property
    def frequency(self) -> float:
        return 1.0 / self.period

    def threshold_at(self, elapsed: np.ndarray) -> float:
        raise UnsupportedPolicyError("A uniform schedule has no threshold")


class ThresholdTable:
    """Thresholds indexed by the number of grid steps since the last sample.

    Constant policies short-circuit to a scalar; elapsed-time policies are
    tabulated lazily and the table grows geometrically as longer intervals
    show up.
    """

    MIN_SIZE = 1024

    def __init__(self, policy: ThresholdPolicy, dt: float):
        if not policy.is_threshold:
            raise UnsupportedPolicyError(f"{policy.kind.value} policies have no threshold table")
        self.policy = policy
        self.dt = dt
        self._constant = policy.a if isinstance(policy, ConstantThreshold) else None
        self._table = np.empty(0)

    def at(self, steps: np.ndarray) -> Union[float, np.ndarray]:
        """Thresholds at the (ascending) elapsed step counts ``steps``."""
        if self._constant is not None:
            return self._constant
        needed = int(steps[-1]) + 1
        if needed > len(self._table):
            size = max(needed, 2 * len(self._table), self.MIN_SIZE)
            self._table = np.asarray(self.policy.threshold_at(np.arange(size) * self.dt), dtype=float)
        return self._table[steps]

    def scalar(self, step: int) -> float:
        if self._constant is not None:
            return float(self._constant)
        return float(self.at(np.array([step]))[0])
