"""Arbitrary-precision reference values for the OU rate functions.

Prints 2F2(1, 1; 3/2, 2; 1), the root v* of R1(v) = 1/R and D(R) for the unit
OU process at a few rates, computed with mpmath independently of soisim's
double-precision series. The test suite recomputes the same values through
``tests/conftest.py``.

    python scripts/golden_oracle.py [--dps 50]
"""

import argparse

import mpmath as mp


def hyp2f2(x):
    return mp.hyp2f2(1, 1, mp.mpf(3) / 2, 2, x)


def r1(v, theta, sigma):
    return v / sigma ** 2 * hyp2f2(theta * v / sigma ** 2)


def r2(v, theta, sigma):
    return -v / (2 * theta) + sigma ** 2 / (2 * theta) * r1(v, theta, sigma)


def r1_inverse(y, theta, sigma):
    if y == 0:
        return mp.mpf(0)
    return mp.findroot(lambda v: r1(v, theta, sigma) - y, (mp.mpf(0), sigma ** 2 * y), solver="anderson")


def drf(rate, theta, sigma):
    return rate * r2(r1_inverse(1 / mp.mpf(rate), theta, sigma), theta, sigma)


def main() -> None:
    parser = argparse.ArgumentParser(description="Print golden constants for the OU rate functions.")
    parser.add_argument("--dps", type=int, default=50, help="decimal digits of working precision")
    args = parser.parse_args()
    mp.mp.dps = args.dps

    theta, sigma = mp.mpf(1), mp.mpf(1)
    print(f"S1 = 2F2(1,1;3/2,2;1) = {mp.nstr(hyp2f2(1), 25)}")
    for rate in (0.5, 1, 2, 10):
        v_star = r1_inverse(1 / mp.mpf(rate), theta, sigma)
        print(f"R={rate}: v* = {mp.nstr(v_star, 25)}  threshold = {mp.nstr(mp.sqrt(v_star), 25)}  "
              f"D* = {mp.nstr(drf(rate, theta, sigma), 25)}")


if __name__ == "__main__":
    main()
