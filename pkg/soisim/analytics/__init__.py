"""Analytics package for soisim.

Closed-form and series-based distortion functions.
"""

from .hypergeometric import hyp2f2, hyp2f2_tail
from .ou_rates import OuRateFunctions, ou_drf
from .wiener import wiener_dff, wiener_uniform_distortion, wiener_threshold_performance

__all__ = [
    "hyp2f2",
    "hyp2f2_tail",
    "OuRateFunctions",
    "ou_drf",
    "wiener_dff",
    "wiener_uniform_distortion",
    "wiener_threshold_performance",
]
