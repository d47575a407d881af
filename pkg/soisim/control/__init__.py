"""Control package for soisim.

This package contains the closed loop driven by SOI codewords and the
impulse-control view of its control signal.
"""

from .loop import ControlTrajectory, run_control, control_cost
from .impulse import ImpulseDecomposition, decompose_control, reintegrate
from .export import export_trajectory, trajectory_frame, impulse_frame

__all__ = [
    "ControlTrajectory",
    "run_control",
    "control_cost",
    "ImpulseDecomposition",
    "decompose_control",
    "reintegrate",
    "export_trajectory",
    "trajectory_frame",
    "impulse_frame",
]
