"""Impulse-control form of the control signal.

Between codewords Z evolves smoothly and is represented by its discrete
left-derivative; at each codeword time it jumps, which is carried by an
impulse (time, weight) instead of a grid spike.
"""

from dataclasses import dataclass
from typing import List, Tuple
import logging

import numpy as np

from .loop import ControlTrajectory
from soisim.codec.soi import grid_indices
from soisim.models.paths import grid_steps

logger = logging.getLogger('soisim')


@dataclass(frozen=True, eq=False)
class ImpulseDecomposition:
    """Z split into jumps and a smooth part.

    Attributes:
        impulse_times (np.ndarray): Jump times nu_i.
        impulse_weights (np.ndarray): Z_{nu_i} - Z_{nu_i-}.
        derivative_values (np.ndarray): Left-derivative of Z on the grid, 0 at jumps.
    """
    impulse_times: np.ndarray
    impulse_weights: np.ndarray
    derivative_values: np.ndarray

    @property
    def impulses(self) -> List[Tuple[float, float]]:
        return list(zip(self.impulse_times.tolist(), self.impulse_weights.tolist()))


def decompose_control(traj: ControlTrajectory) -> ImpulseDecomposition:
    z = np.asarray(traj.z_values, dtype=float)
    indices = grid_indices(traj.event_times, traj.dt)

    derivative = np.zeros(len(z))
    derivative[1:] = np.diff(z) / traj.dt
    weights = z[indices] - z[indices - 1]
    derivative[indices] = 0.0

    return ImpulseDecomposition(
        impulse_times=np.asarray(traj.event_times, dtype=float).copy(),
        impulse_weights=weights,
        derivative_values=derivative,
    )


def reintegrate(decomp: ImpulseDecomposition, dt: float, horizon: float) -> np.ndarray:
    """z~[k] = sum of weights with nu_j <= k dt + sum_{m<=k} derivative[m] dt."""
    n = grid_steps(horizon, dt) + 1
    if len(decomp.derivative_values) != n:
        logger.warning("Derivative has %d points, grid has %d; truncating to the shorter",
                       len(decomp.derivative_values), n)
    n = min(n, len(decomp.derivative_values))

    jumps = np.zeros(n)
    indices = grid_indices(decomp.impulse_times, dt)
    inside = indices < n
    np.add.at(jumps, indices[inside], decomp.impulse_weights[inside])
    return np.cumsum(decomp.derivative_values[:n] * dt) + np.cumsum(jumps)
