"""Sample paths on a uniform time grid."""

from dataclasses import dataclass
from typing import Iterator
import logging
import math

import numpy as np

from .base import ProcessModel
from soisim.errors import DomainError
from soisim.utils.rng import substream

logger = logging.getLogger('soisim')

CHUNK_SIZE = 1 << 18


def grid_steps(horizon: float, dt: float) -> int:
    """Number of grid steps of size ``dt`` that fit in ``horizon``."""
    if not (dt > 0 and horizon > 0):
        logger.error("Horizon and step must be positive, got horizon=%s dt=%s", horizon, dt)
        raise DomainError(f"Horizon and step must be positive, got horizon={horizon}, dt={dt}")
    steps = int(math.floor(horizon / dt + 1e-9))
    if steps < 1:
        logger.error("Horizon %s is shorter than one step %s", horizon, dt)
        raise DomainError(f"Horizon must be at least one step, got horizon={horizon}, dt={dt}")
    return steps


@dataclass(frozen=True, eq=False)
class SamplePath:
    """A realized trajectory X_0 = 0, X_dt, X_2dt, ..., X_T.

    Attributes:
        dt (float): Grid step in seconds.
        values (np.ndarray): Process values at the grid points.
        seed (int): Master seed of the random stream.
        trial (int): Substream index within the master seed.
    """
    dt: float
    values: np.ndarray
    seed: int = 0
    trial: int = 0

    def __post_init__(self):
        if len(self.values) < 2:
            raise DomainError("A sample path needs at least two grid points")
        if self.values[0] != 0.0:
            raise DomainError(f"Sample paths start at X_0 = 0, got {self.values[0]}")
        if not self.dt > 0:
            raise DomainError(f"Grid step must be positive, got dt={self.dt}")

    @property
    def horizon(self) -> float:
        return self.dt * (len(self.values) - 1)

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.values)) * self.dt

    def __len__(self) -> int:
        return len(self.values)


def simulate_path(model: ProcessModel, horizon: float, dt: float, seed: int, trial: int = 0) -> SamplePath:
    """Simulate ``model`` exactly on the grid 0, dt, ..., T.

    Args:
        model (ProcessModel): The source process.
        horizon (float): Time horizon T, at least ``dt``.
        dt (float): Grid step.
        seed (int): Master seed.
        trial (int): Substream index; the harness uses the trial number.

    Returns:
        SamplePath: values[k+1] = exact_step(values[k], dt, xi_k) with xi_k from
        the (seed, trial) substream.
    """
    steps = grid_steps(horizon, dt)
    values = np.concatenate(list(iter_path_chunks(model, horizon, dt, seed, trial)))
    logger.debug("Simulated %s path: %d steps, dt=%s, seed=%s, trial=%s",
                 model.kind.value, steps, dt, seed, trial)
    return SamplePath(dt=dt, values=values, seed=seed, trial=trial)


def iter_path_chunks(
    model: ProcessModel,
    horizon: float,
    dt: float,
    seed: int,
    trial: int = 0,
    chunk_size: int = CHUNK_SIZE,
) -> Iterator[np.ndarray]:
    """Yield the path of ``simulate_path`` in consecutive chunks.

    The first chunk starts with X_0 = 0. Concatenating the chunks gives exactly
    ``simulate_path(model, horizon, dt, seed, trial).values``, so long horizons
    can be scanned without holding the whole path.
    """
    if chunk_size < 1:
        raise DomainError(f"chunk_size must be positive, got {chunk_size}")
    steps = grid_steps(horizon, dt)
    rng = substream(seed, trial)
    x = 0.0
    done = 0
    first = True
    while done < steps:
        n = min(chunk_size, steps - done)
        block = model.propagate(x, rng.standard_normal(n), dt)
        x = float(block[-1])
        done += n
        if first:
            block = np.concatenate(([0.0], block))
            first = False
        yield block
