"""Sign-of-innovation (SOI) encoder and MMSE decoder.

At every stopping time of a symmetric threshold policy the encoder emits one
bit, 1 if the innovation hit +a and 0 if it hit -a. Knowing the threshold and
the timestamps, the decoder recovers each sample exactly in continuous time,

    X_{tau_i} = (2U_i - 1) a(tau_i - tau_{i-1}) + E[X_{tau_i} | X_{tau_{i-1}}],

and holds the conditional mean E[X_t | X_{tau_i}] until the next bit arrives.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple
import logging
import math

import numpy as np

from soisim.errors import AlignmentError, DomainError, UnsupportedPolicyError
from soisim.models.base import ProcessModel
from soisim.models.paths import SamplePath, grid_steps
from soisim.policies.base import ThresholdPolicy, ThresholdTable
from soisim.policies.detection import ResetRule, StoppingRecord, reconstructed_sample

logger = logging.getLogger('soisim')

ALIGN_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SoiStream:
    """Everything the decoder receives.

    Attributes:
        timestamps (np.ndarray): Codeword times, strictly increasing, in (0, T].
        bits (np.ndarray): One bit per codeword.
        horizon (float): Time horizon T.
        dt (float): Grid step the stream was produced on.
    """
    timestamps: np.ndarray
    bits: np.ndarray
    horizon: float
    dt: float

    def __post_init__(self):
        if len(self.timestamps) != len(self.bits):
            raise DomainError("A stream needs one bit per timestamp")
        if len(self.timestamps):
            if np.any(np.diff(self.timestamps) <= 0):
                raise DomainError("Stream timestamps must be strictly increasing")
            if self.timestamps[0] <= 0 or self.timestamps[-1] > self.horizon * (1.0 + 1e-12) + ALIGN_TOL:
                raise DomainError("Stream timestamps must lie in (0, T]")
            if np.any((self.bits != 0) & (self.bits != 1)):
                raise DomainError("SOI codewords are single bits")

    @property
    def events(self) -> List[Tuple[float, int]]:
        return [(float(t), int(b)) for t, b in zip(self.timestamps, self.bits)]

    def __len__(self) -> int:
        return len(self.timestamps)


@dataclass(frozen=True, eq=False)
class EstimatePath:
    """The decoder's estimate on the source grid.

    Attributes:
        dt (float): Grid step.
        values (np.ndarray): X^ at each grid point, right-continuous at the event indices.
        recovered_samples (np.ndarray): Decoder's reconstruction of X_{tau_i}.
        indices (np.ndarray): Grid indices of the events.
    """
    dt: float
    values: np.ndarray
    recovered_samples: np.ndarray
    indices: np.ndarray


def encode(record: StoppingRecord, policy: ThresholdPolicy, horizon: float) -> SoiStream:
    """One bit per stopping time: U_i = (sign_i + 1) / 2.

    Raises:
        UnsupportedPolicyError: The policy is a uniform schedule.
    """
    if not policy.is_threshold:
        logger.error("SOI encoding requires a threshold policy, got %s", policy.kind.value)
        raise UnsupportedPolicyError("SOI codes are defined for symmetric threshold policies only")
    if record.reset is ResetRule.SAMPLE and len(record):
        logger.warning("Encoding a record detected with sample resets; the decoder's "
                       "reconstruction will drift by the accumulated overshoot")
    bits = ((record.signs.astype(np.int16) + 1) // 2).astype(np.int8)
    return SoiStream(timestamps=record.times.copy(), bits=bits, horizon=horizon, dt=record.dt)


def grid_indices(timestamps: np.ndarray, dt: float) -> np.ndarray:
    """Grid indices of ``timestamps``; raises if any is off the dt-grid."""
    timestamps = np.asarray(timestamps, dtype=float)
    indices = np.rint(timestamps / dt).astype(np.int64)
    drift = np.abs(indices * dt - timestamps)
    if np.any(drift > ALIGN_TOL * np.maximum(1.0, np.abs(timestamps))):
        worst = timestamps[np.argmax(drift)]
        logger.error("Timestamp %s is not on the grid with dt=%s", worst, dt)
        raise AlignmentError(f"Timestamp {worst} is not on the grid with dt={dt}")
    return indices


def decode(
    stream: SoiStream,
    model: ProcessModel,
    policy: ThresholdPolicy,
    dt: float,
    analog_samples: Optional[Sequence[float]] = None,
) -> EstimatePath:
    """MMSE estimate on the grid from an SOI stream.

    Args:
        stream (SoiStream): Received codewords and timestamps.
        model (ProcessModel): Source model, for the conditional mean.
        policy (ThresholdPolicy): The encoder's threshold policy.
        dt (float): Grid step of the estimate.
        analog_samples (Sequence[float], optional): Real-valued samples X_{tau_i}.
            When given, the bits are ignored and the samples are used as received
            (frequency-constrained code); uniform schedules are allowed in this mode.

    Returns:
        EstimatePath: Estimate on the grid 0, dt, ..., T.
    """
    analog = analog_samples is not None
    if analog:
        analog_samples = np.asarray(analog_samples, dtype=float)
        if len(analog_samples) != len(stream):
            raise DomainError("Analog decoding needs one sample per timestamp")
        table = None
    else:
        if not policy.is_threshold:
            logger.error("SOI decoding requires a threshold policy, got %s", policy.kind.value)
            raise UnsupportedPolicyError("SOI codes are defined for symmetric threshold policies only")
        table = ThresholdTable(policy, dt)

    n = grid_steps(stream.horizon, dt) + 1
    indices = grid_indices(stream.timestamps, dt)
    if len(indices) and indices[-1] > n - 1:
        raise AlignmentError(f"Timestamp {stream.timestamps[-1]} lies beyond the grid")

    values = np.empty(n)
    recovered = np.empty(len(indices))
    reference = 0.0
    k_last = 0
    for i, (k, bit) in enumerate(zip(indices.tolist(), stream.bits.tolist())):
        steps = k - k_last
        values[k_last:k] = model.mean_after(reference, np.arange(steps) * dt)
        if analog:
            reference = float(analog_samples[i])
        else:
            reference = reconstructed_sample(model, reference, steps * dt, table.scalar(steps), 1 if bit else -1)
        recovered[i] = reference
        k_last = k
    values[k_last:] = model.mean_after(reference, np.arange(n - k_last) * dt)

    logger.debug("Decoded %d events onto %d grid points (%s mode)", len(indices), n,
                 "analog" if analog else "SOI")
    return EstimatePath(dt=dt, values=values, recovered_samples=recovered, indices=indices)


def bit_length(codeword: int) -> int:
    """l(x) = floor(log2 x) + 1 for x > 0, l(0) = 1."""
    codeword = int(codeword)
    if codeword < 0:
        raise DomainError(f"Codewords are non-negative integers, got {codeword}")
    return max(1, codeword.bit_length())


def empirical_rate(stream: SoiStream) -> float:
    """sum_i l(U_i) / T in bits per second."""
    if not stream.horizon > 0:
        raise DomainError(f"Horizon must be positive, got {stream.horizon}")
    return sum(bit_length(u) for u in stream.bits.tolist()) / stream.horizon


def time_average_square(values: np.ndarray, dt: float) -> float:
    """(1/T) sum_{k=0}^{n-2} values[k]^2 dt, the left-Riemann mean square."""
    head = np.asarray(values, dtype=float)[:-1]
    horizon = dt * len(head)
    return float(np.dot(head, head) * dt / horizon)


def empirical_mse(path: SamplePath, estimate: EstimatePath) -> float:
    """(1/T) integral of (X_t - X^_t)^2 dt by a left-Riemann sum."""
    if len(path.values) != len(estimate.values) or not math.isclose(path.dt, estimate.dt, rel_tol=1e-12):
        logger.error("Path and estimate grids differ: %d@%s vs %d@%s",
                     len(path.values), path.dt, len(estimate.values), estimate.dt)
        raise AlignmentError("Path and estimate must share the same grid")
    return time_average_square(path.values - estimate.values, path.dt)
