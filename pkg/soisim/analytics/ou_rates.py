"""Rate and distortion functions of the Ornstein-Uhlenbeck process.

For a symmetric threshold policy the innovation O_t of an OU process exits the
band (-sqrt(v), sqrt(v)) after an expected time R1(v), accruing an expected
squared error R2(v), where

    R1(v) = v / sigma^2 * 2F2(1, 1; 3/2, 2; theta v / sigma^2)
    R2(v) = -v / (2 theta) + sigma^2 / (2 theta) * R1(v).

The optimal threshold for rate R is sqrt(R1^{-1}(1/R)) and the distortion-rate
function is D(R) = R * R2(R1^{-1}(1/R)).
"""

from dataclasses import dataclass
from typing import Tuple
import logging
import math

from scipy.optimize import bisect

from .hypergeometric import SERIES_TOL, hyp2f2, hyp2f2_tail
from soisim.errors import DomainError, NumericError

logger = logging.getLogger('soisim')

BISECTION_RTOL = 1e-12


@dataclass(frozen=True)
class OuRateFunctions:
    """R1, R2 and the derived DRF for an OU process.

    Attributes:
        theta (float): Mean-reversion rate, positive.
        sigma (float): Volatility, positive.
        series_tol (float): Truncation tolerance of the 2F2 partial sums.
    """
    theta: float
    sigma: float
    series_tol: float = SERIES_TOL

    def __post_init__(self):
        if not (self.theta > 0 and self.sigma > 0):
            logger.error("OU rate functions need theta > 0 and sigma > 0, got theta=%s sigma=%s",
                         self.theta, self.sigma)
            raise DomainError(f"theta and sigma must be positive, got theta={self.theta}, sigma={self.sigma}")
        if not self.series_tol > 0:
            raise DomainError(f"series_tol must be positive, got {self.series_tol}")

    def _argument(self, v: float) -> float:
        return self.theta * v / self.sigma ** 2

    @staticmethod
    def _check_nonnegative(name: str, value: float) -> None:
        if value < 0:
            logger.error("%s requires a non-negative argument, got %s", name, value)
            raise DomainError(f"{name} requires a non-negative argument, got {value}")

    def r1(self, v: float) -> float:
        """Expected exit time of the band (-sqrt(v), sqrt(v))."""
        self._check_nonnegative("r1", v)
        return v / self.sigma ** 2 * hyp2f2(self._argument(v), tol=self.series_tol)

    def r2(self, v: float) -> float:
        """Expected accumulated squared innovation until the exit of (-sqrt(v), sqrt(v))."""
        self._check_nonnegative("r2", v)
        # -v/(2 theta) + sigma^2/(2 theta) R1(v) = v^2 / (2 sigma^2) * (2F2(x) - 1) / x
        return v * v / (2.0 * self.sigma ** 2) * hyp2f2_tail(self._argument(v), tol=self.series_tol)

    def r1_inverse(self, y: float) -> float:
        """The unique v >= 0 with r1(v) = y."""
        self._check_nonnegative("r1_inverse", y)
        if y == 0:
            return 0.0

        lo, hi = 0.0, self.sigma ** 2 * y
        while self.r1(hi) < y:
            lo, hi = hi, 2.0 * hi
            if math.isinf(hi):
                raise NumericError(f"Could not bracket R1^-1({y})")

        try:
            root = bisect(lambda v: self.r1(v) - y, lo, hi, xtol=1e-300, rtol=BISECTION_RTOL, maxiter=400)
        except (RuntimeError, ValueError) as e:
            logger.error("Bisection for R1^-1(%s) failed: %s", y, e)
            raise NumericError(f"Bisection for R1^-1({y}) failed: {e}") from e
        return float(root)

    def optimal_threshold(self, rate: float) -> float:
        """sqrt(R1^-1(1/R)), the optimal symmetric threshold for rate R."""
        self._check_rate(rate)
        return math.sqrt(self.r1_inverse(1.0 / rate))

    def drf(self, rate: float) -> float:
        """D(R) = R * R2(R1^-1(1/R))."""
        self._check_rate(rate)
        return rate * self.r2(self.r1_inverse(1.0 / rate))

    def threshold_performance(self, threshold: float) -> Tuple[float, float]:
        """Sampling frequency and distortion of a constant threshold.

        Returns:
            Tuple[float, float]: (1 / R1(a^2), R2(a^2) / R1(a^2)).
        """
        if not threshold > 0:
            logger.error("Threshold performance needs a positive threshold, got %s", threshold)
            raise DomainError(f"threshold must be positive, got {threshold}")
        v = threshold * threshold
        expected_interval = self.r1(v)
        return 1.0 / expected_interval, self.r2(v) / expected_interval

    def uniform_distortion(self, frequency: float) -> float:
        """Time-averaged MSE of uniform sampling with period 1/F and MMSE hold."""
        self._check_rate(frequency)
        u = 2.0 * self.theta / frequency
        # 1 - (1 - e^{-u}) / u
        bracket = (u + math.expm1(-u)) / u
        return self.sigma ** 2 / (2.0 * self.theta) * bracket

    @staticmethod
    def _check_rate(rate: float) -> None:
        if not rate > 0:
            logger.error("Rate must be positive, got %s", rate)
            raise DomainError(f"rate must be positive, got {rate}")


def ou_drf(rate: float, theta: float, sigma: float) -> float:
    """D(R) of the OU process with parameters (theta, sigma)."""
    return OuRateFunctions(theta, sigma).drf(rate)
