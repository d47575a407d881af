"""CSV export of control trajectories."""

from pathlib import Path
from typing import Union
import logging

import pandas as pd

from .impulse import ImpulseDecomposition
from .loop import ControlTrajectory

logger = logging.getLogger('soisim')


def trajectory_frame(traj: ControlTrajectory) -> pd.DataFrame:
    x = traj.x_values if traj.x_values is not None else traj.y_values - traj.z_values
    return pd.DataFrame({"t": traj.times, "x": x, "z": traj.z_values, "y": traj.y_values})


def impulse_frame(decomp: ImpulseDecomposition) -> pd.DataFrame:
    return pd.DataFrame({"time": decomp.impulse_times, "weight": decomp.impulse_weights})


def export_trajectory(
    traj: ControlTrajectory,
    decomp: ImpulseDecomposition,
    trajectory_path: Union[str, Path],
    impulse_path: Union[str, Path],
) -> None:
    """Write columns t, x, z, y to ``trajectory_path`` and time, weight to ``impulse_path``."""
    trajectory_frame(traj).to_csv(trajectory_path, index=False, float_format="%.12g")
    impulse_frame(decomp).to_csv(impulse_path, index=False, float_format="%.12g")
    logger.info("Exported %d grid points to %s and %d impulses to %s",
                len(traj.y_values), trajectory_path, len(decomp.impulse_times), impulse_path)
