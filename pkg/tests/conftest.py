import os

import mpmath as mp
import pytest
from hypothesis import HealthCheck, settings

from soisim.models import OrnsteinUhlenbeck, WienerFamily

settings.register_profile("default", max_examples=50, deadline=None)
settings.register_profile("thorough", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


class GoldenOracle:
    """mpmath evaluations of the OU rate functions at 50 digits."""

    DPS = 50

    def hyp2f2(self, x) -> float:
        with mp.workdps(self.DPS):
            return float(mp.hyp2f2(1, 1, mp.mpf(3) / 2, 2, mp.mpf(x)))

    def _r1(self, v, theta, sigma):
        return v / sigma ** 2 * mp.hyp2f2(1, 1, mp.mpf(3) / 2, 2, theta * v / sigma ** 2)

    def r1(self, v, theta=1.0, sigma=1.0) -> float:
        with mp.workdps(self.DPS):
            return float(self._r1(mp.mpf(v), mp.mpf(theta), mp.mpf(sigma)))

    def _r1_inverse(self, y, theta, sigma):
        return mp.findroot(lambda v: self._r1(v, theta, sigma) - y, (mp.mpf(0), sigma ** 2 * y),
                           solver="anderson")

    def r1_inverse(self, y, theta=1.0, sigma=1.0) -> float:
        with mp.workdps(self.DPS):
            return float(self._r1_inverse(mp.mpf(y), mp.mpf(theta), mp.mpf(sigma)))

    def drf(self, rate, theta=1.0, sigma=1.0) -> float:
        with mp.workdps(self.DPS):
            theta, sigma, rate = mp.mpf(theta), mp.mpf(sigma), mp.mpf(rate)
            v = self._r1_inverse(1 / rate, theta, sigma)
            r2 = -v / (2 * theta) + sigma ** 2 / (2 * theta) * self._r1(v, theta, sigma)
            return float(rate * r2)


@pytest.fixture(scope="session")
def oracle():
    return GoldenOracle()


@pytest.fixture(scope="session")
def golden(oracle):
    """S1, v* and D* for the unit OU process at R = 1."""
    v_star = oracle.r1_inverse(1.0)
    return {"S1": oracle.hyp2f2(1.0), "v_star": v_star, "D_star": oracle.drf(1.0)}


@pytest.fixture
def standard_wiener():
    return WienerFamily(c=1.0, a=1.0, b=0.0)


@pytest.fixture
def unit_ou():
    return OrnsteinUhlenbeck(theta=1.0, mu=0.0, sigma=1.0)
