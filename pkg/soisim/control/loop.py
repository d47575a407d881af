"""Rate-constrained control of an additive disturbance.

The plant is Y_t = X_t + Z_t. The encoder sees the plant, samples on the
innovations of the disturbance X and sends SOI codewords; the controller
decodes them and applies Z_t = -X^_t. Because Z is a deterministic function of
past codewords, the encoder runs a replica of the decoder and recovers
X = Y - Z exactly, so the closed loop reduces to the estimation problem and
the mean-square cost on Y equals the estimator's MSE.
"""

from dataclasses import dataclass
from typing import Optional
import logging

import numpy as np

from soisim.codec.soi import SoiStream, decode, encode, time_average_square
from soisim.errors import DomainError, NumericError, UnsupportedPolicyError
from soisim.models.base import ProcessModel
from soisim.models.paths import simulate_path
from soisim.policies.base import ThresholdPolicy
from soisim.policies.detection import ExitScanner, ResetRule

logger = logging.getLogger('soisim')


@dataclass(frozen=True, eq=False)
class ControlTrajectory:
    """One closed-loop run on the grid 0, dt, ..., T.

    Attributes:
        dt (float): Grid step.
        horizon (float): Time horizon T.
        y_values (np.ndarray): Plant state.
        z_values (np.ndarray): Control signal, right-continuous at the event times.
        event_times (np.ndarray): Codeword times nu_i = tau_i.
        x_values (np.ndarray, optional): The disturbance path behind the run.
        stream (SoiStream, optional): Codewords the controller received.
        recovered_samples (np.ndarray, optional): Controller's reconstruction of X_{tau_i}.
    """
    dt: float
    horizon: float
    y_values: np.ndarray
    z_values: np.ndarray
    event_times: np.ndarray
    x_values: Optional[np.ndarray] = None
    stream: Optional[SoiStream] = None
    recovered_samples: Optional[np.ndarray] = None

    def __post_init__(self):
        if len(self.y_values) != len(self.z_values):
            raise DomainError("Plant state and control signal must share the grid")
        if self.x_values is not None and len(self.x_values) != len(self.y_values):
            raise DomainError("Disturbance and plant state must share the grid")

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.y_values)) * self.dt


def run_control(
    model: ProcessModel,
    policy: ThresholdPolicy,
    horizon: float,
    dt: float,
    seed: int,
    trial: int = 0,
) -> ControlTrajectory:
    """Simulate the closed loop driven by the (seed, trial) disturbance.

    The encoder watches the plant state Y = X + Z with its replica control
    Z = -X^. That is the innovation X - X^, so the plain exit scanner on the
    disturbance is the plant encoder.

    Args:
        model (ProcessModel): Disturbance process.
        policy (ThresholdPolicy): Symmetric threshold policy of the encoder.
        horizon (float): Time horizon T.
        dt (float): Grid step.
        seed (int): Master seed.
        trial (int): Substream index.

    Returns:
        ControlTrajectory: Plant state, control signal and the codeword times.

    Raises:
        UnsupportedPolicyError: The policy is a uniform schedule.
        NumericError: The encoder's replica and the controller disagree.
    """
    if not policy.is_threshold:
        logger.error("Control needs a threshold policy, got %s", policy.kind.value)
        raise UnsupportedPolicyError("The control loop is driven by SOI codewords; use a threshold policy")

    disturbance = simulate_path(model, horizon, dt, seed, trial)
    encoder = ExitScanner(model, policy, dt, horizon=disturbance.horizon, reset=ResetRule.RECONSTRUCTION)
    encoder.feed(disturbance.values)
    record = encoder.finish()

    stream = encode(record, policy, disturbance.horizon)
    estimate = decode(stream, model, policy, dt)
    if not np.array_equal(record.references, estimate.recovered_samples):
        logger.error("Encoder replica diverged from the controller after %d events", len(record))
        raise NumericError("Encoder replica and controller reconstructions differ")

    z_values = -estimate.values
    y_values = disturbance.values + z_values
    logger.info("Control run: %d codewords over T=%s, cost %.6g",
                len(stream), disturbance.horizon, time_average_square(y_values, dt))
    return ControlTrajectory(
        dt=dt,
        horizon=disturbance.horizon,
        y_values=y_values,
        z_values=z_values,
        event_times=stream.timestamps,
        x_values=disturbance.values,
        stream=stream,
        recovered_samples=estimate.recovered_samples,
    )


def control_cost(traj: ControlTrajectory) -> float:
    """(1/T) integral of Y_t^2 dt, left-Riemann."""
    return time_average_square(traj.y_values, traj.dt)
