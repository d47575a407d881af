"""Series evaluation of 2F2(1, 1; 3/2, 2; x).

With these parameters the n-th coefficient reduces to 1 / ((3/2)_n (n + 1)),
so consecutive terms obey

    term_{n+1} = term_n * x * (1 + n) / ((3/2 + n) (2 + n)).

The series is entire and all terms are positive for x >= 0.
"""

import logging

from soisim.errors import NumericError

logger = logging.getLogger('soisim')

SERIES_TOL = 1e-14
MAX_TERMS = 100_000


def _sum_series(x: float, first_term: float, first_index: int, tol: float, max_terms: int) -> float:
    total = first_term
    term = first_term
    n = first_index
    for _ in range(max_terms):
        term *= x * (1.0 + n) / ((1.5 + n) * (2.0 + n))
        total += term
        n += 1
        if abs(term) < tol * abs(total):
            return total
    logger.error("2F2 series did not converge in %d terms at x=%s", max_terms, x)
    raise NumericError(f"2F2 series did not converge in {max_terms} terms at x={x}")


def hyp2f2(x: float, tol: float = SERIES_TOL, max_terms: int = MAX_TERMS) -> float:
    """2F2(1, 1; 3/2, 2; x) summed until |term| < tol * |partial sum|.

    Args:
        x (float): Argument; any finite value, x >= 0 in practice.
        tol (float): Relative truncation tolerance.
        max_terms (int): Hard cap on the number of terms.

    Returns:
        float: The series value. hyp2f2(0) is exactly 1.
    """
    if x == 0:
        return 1.0
    return _sum_series(float(x), 1.0, 0, tol, max_terms)


def hyp2f2_tail(x: float, tol: float = SERIES_TOL, max_terms: int = MAX_TERMS) -> float:
    """(hyp2f2(x) - 1) / x, summed directly so small x loses no precision.

    Equals 1/3 at x = 0.
    """
    if x == 0:
        return 1.0 / 3.0
    return _sum_series(float(x), 1.0 / 3.0, 1, tol, max_terms)
