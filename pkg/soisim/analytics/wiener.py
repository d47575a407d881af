"""Closed forms for the Wiener family X_t = c W_{a t} + b t."""

from typing import Tuple
import logging

from soisim.errors import DomainError

logger = logging.getLogger('soisim')


def _check_frequency(frequency: float) -> None:
    if not frequency > 0:
        logger.error("Frequency must be positive, got %s", frequency)
        raise DomainError(f"frequency must be positive, got {frequency}")


def wiener_dff(frequency: float, c: float, a_scale: float) -> float:
    """Distortion-frequency function a c^2 / (6 F); equals the DRF at F = R."""
    _check_frequency(frequency)
    return a_scale * c * c / (6.0 * frequency)


def wiener_uniform_distortion(frequency: float, c: float, a_scale: float) -> float:
    """MSE of uniform sampling at frequency F with a hold estimate: a c^2 / (2 F)."""
    _check_frequency(frequency)
    return a_scale * c * c / (2.0 * frequency)


def wiener_threshold_performance(threshold: float, c: float, a_scale: float) -> Tuple[float, float]:
    """Sampling frequency and distortion of a constant threshold.

    The innovation is c W_{a t}; its exit time from (-A, A) has mean A^2 / (c^2 a)
    and the squared innovation integrates to A^4 / (6 c^2 a) in expectation.
    With c = 0 the innovation stays at 0: no samples and no distortion.

    Returns:
        Tuple[float, float]: (c^2 a / A^2, A^2 / 6), or (0, 0) when c = 0.
    """
    if not threshold > 0:
        logger.error("Threshold performance needs threshold > 0, got %s", threshold)
        raise DomainError(f"threshold must be positive, got {threshold}")
    if c == 0:
        return 0.0, 0.0
    return c * c * a_scale / (threshold * threshold), threshold * threshold / 6.0
