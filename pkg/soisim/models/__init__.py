"""Models package for soisim.

This package contains the source process models and exact path simulation.
"""

from .base import ProcessKind, ProcessModel, ResidualSpec, conditional_mean, exact_step, residual_spec
from .wiener import WienerFamily
from .ornstein_uhlenbeck import OrnsteinUhlenbeck
from .paths import SamplePath, simulate_path, iter_path_chunks, grid_steps
from .model_factory import ModelFactory

__all__ = [
    'ProcessKind',
    'ProcessModel',
    'ResidualSpec',
    'WienerFamily',
    'OrnsteinUhlenbeck',
    'SamplePath',
    'ModelFactory',
    'conditional_mean',
    'exact_step',
    'residual_spec',
    'simulate_path',
    'iter_path_chunks',
    'grid_steps',
]
