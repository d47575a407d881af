"""Stopping-time detection on discretized paths.

The scanner walks the grid after the last stopping time in geometrically
growing windows, computing the innovation X_t - E[X_t | reference, tau_i]
vectorized over each window, and stops at the first grid point with
|innovation| >= a(t - tau_i). The same pass can accumulate the left-Riemann
squared error of the conditional-mean estimate, so long horizons never need
the full path in memory.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional
import logging

import numpy as np

from .base import PolicyKind, ThresholdPolicy, ThresholdTable, UniformSchedule
from soisim.errors import DomainError, UnsupportedPolicyError
from soisim.models.base import ProcessModel
from soisim.models.paths import SamplePath

logger = logging.getLogger('soisim')


class ResetRule(str, Enum):
    """What the innovation is measured against after a stopping time.

    SAMPLE resets to the true sample X_{tau_i} (frequency-constrained code with
    real-valued samples). RECONSTRUCTION resets to the value the SOI decoder
    recovers from the sign bit, E[X_{tau_i} | previous reference] +/- a, so the
    encoder tracks the decoder exactly.
    """
    SAMPLE = "sample"
    RECONSTRUCTION = "reconstruction"


def reconstructed_sample(model: ProcessModel, reference: float, elapsed: float, threshold: float, sign: int) -> float:
    """X_{tau_i} = E[X_{tau_i} | reference, tau_{i-1}] + (2U_i - 1) a_{i-1}(tau_i, tau_{i-1})."""
    return float(model.mean_after(reference, elapsed) + sign * threshold)


@dataclass(frozen=True, eq=False)
class StoppingRecord:
    """Stopping times detected on a grid.

    Attributes:
        times (np.ndarray): tau_1 < tau_2 < ..., all in (0, T].
        signs (np.ndarray): +1 / -1 side of the band hit (+1 for schedules).
        sample_values (np.ndarray): True X_{tau_i}.
        indices (np.ndarray): Grid indices of the stopping times.
        references (np.ndarray): Value the innovation was reset to at each tau_i.
        innovations (np.ndarray): Innovation at detection.
        thresholds (np.ndarray): a(tau_i - tau_{i-1}) at detection (0 for schedules).
        dt (float): Grid step.
        reset (ResetRule): Reset rule used during detection.
        policy_kind (PolicyKind): Kind of the policy that produced the record.
    """
    times: np.ndarray
    signs: np.ndarray
    sample_values: np.ndarray
    indices: np.ndarray
    references: np.ndarray
    innovations: np.ndarray
    thresholds: np.ndarray
    dt: float
    reset: ResetRule = ResetRule.SAMPLE
    policy_kind: PolicyKind = PolicyKind.CONSTANT_THRESHOLD

    def __post_init__(self):
        n = len(self.times)
        if not (len(self.signs) == len(self.sample_values) == len(self.indices) == n):
            raise DomainError("Stopping record fields must have equal lengths")
        if n > 1 and np.any(np.diff(self.times) <= 0):
            raise DomainError("Stopping times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def intervals(self) -> np.ndarray:
        """tau_{i+1} - tau_i with tau_0 = 0."""
        return np.diff(self.times, prepend=0.0)

    @property
    def overshoots(self) -> np.ndarray:
        """|innovation| - a at each detection; the grid's exit bias."""
        if self.policy_kind is PolicyKind.UNIFORM_SCHEDULE:
            return np.zeros(len(self.times))
        return np.abs(self.innovations) - self.thresholds


class ExitScanner:
    """Single-pass, chunk-fed stopping-time detector.

    Feed consecutive chunks of grid values (the first chunk starts with X_0 = 0),
    then call ``finish``. With ``track_error`` the scanner also accumulates
    sum_k (X_k - X^_k)^2 dt over k = 0 .. n-2 and the same sum per sampling
    interval, where X^ is the conditional mean from the current reference.
    """

    INITIAL_WINDOW = 1024
    MAX_WINDOW = 1 << 20

    def __init__(
        self,
        model: ProcessModel,
        policy: ThresholdPolicy,
        dt: float,
        horizon: Optional[float] = None,
        reset: ResetRule = ResetRule.SAMPLE,
        track_error: bool = False,
    ):
        if not dt > 0:
            raise DomainError(f"Grid step must be positive, got dt={dt}")
        self.model = model
        self.policy = policy
        self.dt = dt
        self.horizon = horizon
        self.reset = ResetRule(reset)
        self.track_error = track_error

        if policy.is_threshold:
            self._table = ThresholdTable(policy, dt)
        else:
            if horizon is None:
                raise DomainError("Uniform schedules need the horizon to place their sampling times")
            if self.reset is ResetRule.RECONSTRUCTION:
                raise UnsupportedPolicyError("Uniform schedules carry no sign bit to reconstruct from")
            self._table = None
        self._schedule_count = 1

        self._n_seen = 0
        self._k_last = 0
        self._reference = 0.0
        self._window = self.INITIAL_WINDOW
        self._finished = False

        self._indices: List[int] = []
        self._signs: List[int] = []
        self._samples: List[float] = []
        self._references: List[float] = []
        self._innovations: List[float] = []
        self._thresholds: List[float] = []

        self._sq_error = 0.0
        self._segment_error = 0.0
        self._last_sq = 0.0
        self._rewards: List[float] = []

    def feed(self, chunk: np.ndarray) -> None:
        """Scan the next ``len(chunk)`` grid values."""
        if self._finished:
            raise DomainError("Scanner already finished")
        chunk = np.asarray(chunk, dtype=float)
        offset = self._n_seen
        end = offset + len(chunk)
        pos = offset

        if offset == 0 and len(chunk):
            if chunk[0] != 0.0:
                raise DomainError(f"Paths start at X_0 = 0, got {chunk[0]}")
            self._accumulate(self._innovation(chunk[:1], np.zeros(1, dtype=np.int64)))
            pos = 1

        while pos < end:
            stop = min(pos + self._window, end)
            steps = np.arange(pos - self._k_last, stop - self._k_last)
            segment = chunk[pos - offset:stop - offset]
            innovation = self._innovation(segment, steps)
            hit = self._first_exit(innovation, steps, pos, stop)
            if hit < 0:
                self._accumulate(innovation)
                pos = stop
                self._window = min(2 * self._window, self.MAX_WINDOW)
                continue
            self._accumulate(innovation[:hit])
            k = pos + hit
            self._record(k, float(segment[hit]), float(innovation[hit]), int(steps[hit]))
            pos = k + 1

        self._n_seen = end

    def _innovation(self, segment: np.ndarray, steps: np.ndarray) -> np.ndarray:
        return segment - self.model.mean_after(self._reference, steps * self.dt)

    def _first_exit(self, innovation: np.ndarray, steps: np.ndarray, pos: int, stop: int) -> int:
        if self._table is not None:
            hits = np.flatnonzero(np.abs(innovation) >= self._table.at(steps))
            return int(hits[0]) if hits.size else -1
        target = self._next_scheduled_index()
        if target is None or not pos <= target < stop:
            return -1
        return target - pos

    def _next_scheduled_index(self) -> Optional[int]:
        period = self.policy.period
        limit = self.horizon * (1.0 + 1e-12)
        while self._schedule_count * period <= limit:
            index = int(round(self._schedule_count * period / self.dt))
            if index > self._k_last:
                return index
            # several schedule times snapped to one grid point
            self._schedule_count += 1
        return None

    def _record(self, k: int, x_value: float, innovation: float, steps: int) -> None:
        elapsed = steps * self.dt
        if self._table is None:
            sign, threshold = 1, 0.0
            self._schedule_count += 1
        else:
            sign = 1 if innovation >= 0 else -1
            threshold = self._table.scalar(steps)

        if self.reset is ResetRule.SAMPLE:
            reference = x_value
        else:
            reference = reconstructed_sample(self.model, self._reference, elapsed, threshold, sign)

        self._indices.append(k)
        self._signs.append(sign)
        self._samples.append(x_value)
        self._references.append(reference)
        self._innovations.append(innovation)
        self._thresholds.append(threshold)

        if self.track_error:
            self._rewards.append(self._segment_error * self.dt)
            self._segment_error = 0.0
        self._k_last = k
        self._reference = reference
        self._window = self.INITIAL_WINDOW
        self._accumulate(np.array([x_value - self.model.mean_after(reference, 0.0)]))

    def _accumulate(self, errors: np.ndarray) -> None:
        if not self.track_error or len(errors) == 0:
            return
        total = float(np.dot(errors, errors))
        self._sq_error += total
        self._segment_error += total
        self._last_sq = float(errors[-1] * errors[-1])

    def finish(self) -> StoppingRecord:
        """Close the scan and return the stopping record."""
        if self._n_seen < 2:
            raise DomainError("A scan needs at least two grid points")
        if not self._finished and self.track_error:
            # left-Riemann sum: the final grid point carries no weight
            self._sq_error -= self._last_sq
            self._segment_error -= self._last_sq
        self._finished = True

        indices = np.asarray(self._indices, dtype=np.int64)
        logger.debug("Detected %d stopping times on %d grid points (%s reset)",
                     len(indices), self._n_seen, self.reset.value)
        return StoppingRecord(
            times=indices * self.dt,
            signs=np.asarray(self._signs, dtype=np.int8),
            sample_values=np.asarray(self._samples, dtype=float),
            indices=indices,
            references=np.asarray(self._references, dtype=float),
            innovations=np.asarray(self._innovations, dtype=float),
            thresholds=np.asarray(self._thresholds, dtype=float),
            dt=self.dt,
            reset=self.reset,
            policy_kind=self.policy.kind,
        )

    def error_integral(self) -> float:
        """sum_{k=0}^{n-2} (X_k - X^_k)^2 dt; valid after ``finish``."""
        return self._sq_error * self.dt

    def interval_rewards(self) -> np.ndarray:
        """Squared-error integral over each completed sampling interval."""
        return np.asarray(self._rewards, dtype=float)

    def truncated_reward(self) -> float:
        """Squared-error integral over the final, unfinished interval [tau_N, T)."""
        return self._segment_error * self.dt


def detect_stopping_times(
    path: SamplePath,
    model: ProcessModel,
    policy: ThresholdPolicy,
    reset: ResetRule = ResetRule.SAMPLE,
) -> StoppingRecord:
    """Detect the stopping times of ``policy`` on ``path``.

    Args:
        path (SamplePath): Path simulated from ``model``.
        model (ProcessModel): Supplies the conditional mean.
        policy (ThresholdPolicy): Threshold rule or uniform schedule.
        reset (ResetRule): Reference used after each stopping time.

    Returns:
        StoppingRecord: One entry per detected stopping time; tau_0 = 0 is implicit.
    """
    if path is None or len(path.values) < 2:
        logger.error("Cannot detect stopping times on an empty path")
        raise DomainError("Cannot detect stopping times on an empty path")
    scanner = ExitScanner(model, policy, path.dt, horizon=path.horizon, reset=reset)
    scanner.feed(path.values)
    return scanner.finish()


def empirical_frequency(record: StoppingRecord, horizon: float) -> float:
    """N / T."""
    if not horizon > 0:
        raise DomainError(f"Horizon must be positive, got {horizon}")
    return len(record.times) / horizon
