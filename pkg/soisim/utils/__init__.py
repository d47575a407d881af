"""Utilities package for soisim.

This package contains logging configuration and random-stream helpers.
"""


from .logging_config import setup_logging, log_duration
from .rng import substream

__all__ = ['setup_logging', 'log_duration', 'substream']
