"""Diagnostics for Monte Carlo sampling experiments.

This module provides the renewal-reward ratio estimator, the Dynkin-identity
check for OU exit episodes and the i.i.d. check on sampling intervals, plus an
evaluator that bundles them into the named values of an experiment report.
"""

from dataclasses import dataclass
from typing import Dict, Iterator, Optional, Sequence
import logging
import math

import numpy as np
from scipy.signal import lfilter
from scipy.stats import ks_2samp

from soisim.analytics.ou_rates import OuRateFunctions
from soisim.errors import DomainError, InsufficientEpisodesError, UnsupportedModelError
from soisim.models.base import ProcessKind, ProcessModel
from soisim.utils.logging_config import log_duration
from soisim.utils.rng import substream

logger = logging.getLogger('soisim')

MIN_IID_INTERVALS = 20
DYNKIN_BLOCK_ROWS = 4096
DYNKIN_CHUNK_STEPS = 512


def renewal_ratio(intervals: Sequence[float], rewards: Sequence[float]) -> float:
    """(sum of rewards) / (sum of intervals), the long-run reward per unit time.

    Raises:
        DomainError: Length mismatch, no intervals or a zero total interval.
    """
    intervals = np.asarray(intervals, dtype=float)
    rewards = np.asarray(rewards, dtype=float)
    if len(intervals) != len(rewards) or len(intervals) == 0:
        logger.error("renewal_ratio needs equal, non-empty inputs, got %d intervals and %d rewards",
                     len(intervals), len(rewards))
        raise DomainError("Intervals and rewards must have equal, non-zero lengths")
    total = float(np.sum(intervals))
    if not total > 0:
        logger.error("renewal_ratio needs a positive total interval, got %s", total)
        raise DomainError(f"Total interval must be positive, got {total}")
    return float(np.sum(rewards)) / total


@dataclass(frozen=True)
class IntervalDiagnostic:
    """Two-sample KS p-value between the halves and the lag-1 autocorrelation."""
    ks_p: float
    lag1: float
    lag1_degenerate: bool = False

    def __iter__(self) -> Iterator[float]:
        return iter((self.ks_p, self.lag1))


def iid_interval_diagnostic(intervals: Sequence[float]) -> IntervalDiagnostic:
    """Check that sampling intervals look i.i.d.

    Args:
        intervals (Sequence[float]): At least 20 consecutive sampling intervals.

    Returns:
        IntervalDiagnostic: Asymptotic two-sample KS p-value between the first
        and second half, and the lag-1 sample autocorrelation. Zero-variance
        input reports lag1 = 0 with ``lag1_degenerate`` set.
    """
    intervals = np.asarray(intervals, dtype=float)
    if len(intervals) < MIN_IID_INTERVALS:
        logger.error("iid_interval_diagnostic needs %d intervals, got %d", MIN_IID_INTERVALS, len(intervals))
        raise DomainError(f"Need at least {MIN_IID_INTERVALS} intervals, got {len(intervals)}")

    half = len(intervals) // 2
    ks_p = float(ks_2samp(intervals[:half], intervals[half:], method="asymp").pvalue)

    centered = intervals - intervals.mean()
    variance = float(np.dot(centered, centered))
    if variance <= 0.0:
        logger.warning("Intervals have zero variance; lag-1 autocorrelation reported as 0")
        return IntervalDiagnostic(ks_p=ks_p, lag1=0.0, lag1_degenerate=True)
    lag1 = float(np.dot(centered[:-1], centered[1:]) / variance)
    return IntervalDiagnostic(ks_p=ks_p, lag1=lag1)


@dataclass(frozen=True)
class DynkinResult:
    """Relative errors of the two Dynkin identities over completed exit episodes.

    ``rel_err_time`` and ``rel_err_area`` compare the episode means with R1 and
    R2 at the realized exit values; a grid exit time is still a stopping time,
    so these are Monte Carlo error only. ``grid_err_time`` and
    ``grid_err_area`` compare E[R1(O_T^2)] and E[R2(O_T^2)] with R1 and R2 at
    threshold^2, the continuous-time exit value, and shrink with the overshoot.

    Iterates as ``(rel_err_time, rel_err_area)``.
    """
    rel_err_time: float
    rel_err_area: float
    episodes: int
    mean_time: float
    mean_area: float
    grid_err_time: float = 0.0
    grid_err_area: float = 0.0

    def __iter__(self) -> Iterator[float]:
        return iter((self.rel_err_time, self.rel_err_area))


@dataclass(frozen=True)
class DynkinRefinement:
    """Dynkin results at dt and dt / 2 from the same Brownian draws."""
    dt: float
    coarse: DynkinResult
    fine: DynkinResult

    @property
    def time_reduction(self) -> float:
        """coarse / fine grid error of the time identity, about sqrt(2)."""
        return self.coarse.grid_err_time / self.fine.grid_err_time

    @property
    def area_reduction(self) -> float:
        return self.coarse.grid_err_area / self.fine.grid_err_area


def _check_dynkin_inputs(model: ProcessModel, threshold: float, trials: int, dt: float) -> None:
    if model.kind is not ProcessKind.ORNSTEIN_UHLENBECK:
        logger.error("Dynkin check needs an OU model, got %s", model.kind.value)
        raise UnsupportedModelError(f"The Dynkin identities are implemented for OU models, got {model.kind.value}")
    if not (threshold > 0 and dt > 0 and trials >= 1):
        logger.error("Dynkin check needs threshold > 0, dt > 0, trials >= 1; got %s, %s, %s", threshold, dt, trials)
        raise DomainError("Dynkin check needs a positive threshold, step and episode count")


@log_duration
def dynkin_check(
    model: ProcessModel,
    threshold: float,
    trials: int,
    dt: float,
    seed: int,
    max_episode_time: Optional[float] = None,
    min_episodes: Optional[int] = None,
) -> DynkinResult:
    """Compare simulated OU exit episodes with E[T] = E[R1(O_T^2)] and E[int O^2] = E[R2(O_T^2)].

    Each episode starts the innovation O at 0, runs the exact OU recursion
    dO = -theta O dt + sigma dW on the grid and stops at the first grid point
    with |O| >= threshold. R1 and R2 are evaluated at the realized exit values
    so the identities hold exactly in the continuous limit.

    Args:
        model (ProcessModel): An Ornstein-Uhlenbeck model.
        threshold (float): Band half-width, positive.
        trials (int): Number of episodes to simulate.
        dt (float): Grid step.
        seed (int): Master seed; episodes draw from its substream 0.
        max_episode_time (float, optional): Episodes still inside the band after
            this long are dropped. Defaults to 50 R1(threshold^2).
        min_episodes (int, optional): Fewest completed episodes accepted.
            Defaults to 90% of ``trials``.

    Returns:
        DynkinResult: Relative errors of the time and area identities.

    Raises:
        UnsupportedModelError: The model is not OU.
        InsufficientEpisodesError: Too many episodes hit ``max_episode_time``.
    """
    _check_dynkin_inputs(model, threshold, trials, dt)
    rates = OuRateFunctions(model.theta, model.sigma)
    if max_episode_time is None:
        max_episode_time = 50.0 * rates.r1(threshold * threshold)
    max_steps = max(1, int(max_episode_time / dt))

    phi = math.exp(-model.theta * dt)
    scale = math.sqrt(model.residual_variance(dt))
    rng = substream(seed, 0)

    blocks = []
    remaining = trials
    while remaining > 0:
        rows = min(remaining, DYNKIN_BLOCK_ROWS)
        remaining -= rows
        blocks.append(_exit_block(rng, rows, threshold, phi, scale, dt, max_steps))

    times, areas, exits = (np.concatenate(column) for column in zip(*blocks))
    result = _summarize(rates, threshold, times, areas, exits, max_episode_time, min_episodes)
    logger.info("Dynkin check over %d episodes: time error %.4f, area error %.4f",
                result.episodes, result.rel_err_time, result.rel_err_area)
    return result


@log_duration
def dynkin_refinement(
    model: ProcessModel,
    threshold: float,
    trials: int,
    dt: float,
    seed: int,
    max_episode_time: Optional[float] = None,
    min_episodes: Optional[int] = None,
) -> DynkinRefinement:
    """Run the Dynkin check at ``dt`` and ``dt / 2`` on coupled episodes.

    Episodes are simulated once on the dt / 2 grid; the dt episodes watch every
    other point of the same paths, so the two levels differ by the grid alone.
    Arguments are as for ``dynkin_check``, with ``dt`` the coarse step.

    Returns:
        DynkinRefinement: Both results. The grid errors shrink by about sqrt(2)
        from the coarse to the fine level.
    """
    _check_dynkin_inputs(model, threshold, trials, dt)
    rates = OuRateFunctions(model.theta, model.sigma)
    if max_episode_time is None:
        max_episode_time = 50.0 * rates.r1(threshold * threshold)
    fine_dt = 0.5 * dt
    max_steps = 2 * max(1, int(max_episode_time / dt))

    phi = math.exp(-model.theta * fine_dt)
    scale = math.sqrt(model.residual_variance(fine_dt))
    rng = substream(seed, 0)

    blocks = []
    remaining = trials
    while remaining > 0:
        rows = min(remaining, DYNKIN_BLOCK_ROWS)
        remaining -= rows
        blocks.append(_coupled_exit_block(rng, rows, threshold, phi, scale, fine_dt, max_steps))

    columns = [np.concatenate(column) for column in zip(*blocks)]
    fine = _summarize(rates, threshold, *columns[:3], max_episode_time, min_episodes)
    coarse = _summarize(rates, threshold, *columns[3:], max_episode_time, min_episodes)
    refinement = DynkinRefinement(dt=dt, coarse=coarse, fine=fine)
    logger.info("Dynkin refinement dt=%.3g -> %.3g: grid time error %.4g -> %.4g (x%.3f), "
                "grid area error %.4g -> %.4g (x%.3f)", dt, fine_dt,
                coarse.grid_err_time, fine.grid_err_time, refinement.time_reduction,
                coarse.grid_err_area, fine.grid_err_area, refinement.area_reduction)
    return refinement


def _summarize(rates: OuRateFunctions, threshold: float, times: np.ndarray, areas: np.ndarray,
               exits: np.ndarray, max_episode_time: float, min_episodes: Optional[int]) -> DynkinResult:
    trials = len(times)
    if min_episodes is None:
        min_episodes = max(1, math.ceil(0.9 * trials))
    done = ~np.isnan(times)
    completed = int(done.sum())
    if completed < trials:
        logger.warning("Dropped %d of %d exit episodes longer than %.3g", trials - completed, trials, max_episode_time)
    if completed < min_episodes:
        logger.error("Only %d exit episodes completed, need %d", completed, min_episodes)
        raise InsufficientEpisodesError(
            f"Only {completed} of {trials} exit episodes completed within {max_episode_time:.3g}")

    times, areas, exits = times[done], areas[done], exits[done]
    squared = exits * exits
    predicted_time = float(np.mean([rates.r1(v) for v in squared]))
    predicted_area = float(np.mean([rates.r2(v) for v in squared]))
    nominal_time = rates.r1(threshold * threshold)
    nominal_area = rates.r2(threshold * threshold)
    mean_time = float(times.mean())
    mean_area = float(areas.mean())
    return DynkinResult(
        rel_err_time=abs(mean_time - predicted_time) / mean_time,
        rel_err_area=abs(mean_area - predicted_area) / mean_area,
        episodes=completed,
        mean_time=mean_time,
        mean_area=mean_area,
        grid_err_time=abs(predicted_time - nominal_time) / nominal_time,
        grid_err_area=abs(predicted_area - nominal_area) / nominal_area,
    )


def _scan_exits(paths: np.ndarray, start: np.ndarray, threshold: float, dt: float):
    """First grid exit per row and the left-Riemann area of O^2 up to it."""
    width = paths.shape[1]
    outside = np.abs(paths) >= threshold
    hit = outside.any(axis=1)
    first = np.where(hit, outside.argmax(axis=1), width)

    # left-Riemann: the previous chunk's last point is weighted here, the exit point is not
    squares = np.concatenate((start[:, None], paths[:, :-1]), axis=1) ** 2
    columns = np.arange(width)[None, :]
    area = np.sum(np.where(columns <= first[:, None], squares, 0.0), axis=1) * dt
    return hit, first, area


def _exit_block(rng: np.random.Generator, rows: int, threshold: float, phi: float, scale: float,
                dt: float, max_steps: int):
    """Run ``rows`` exit episodes side by side; unfinished episodes come back as NaN."""
    times = np.full(rows, np.nan)
    areas = np.zeros(rows)
    exits = np.full(rows, np.nan)

    active = np.arange(rows)
    current = np.zeros(rows)
    steps_done = 0
    while active.size and steps_done < max_steps:
        width = min(DYNKIN_CHUNK_STEPS, max_steps - steps_done)
        draws = rng.standard_normal((active.size, width))
        paths = lfilter([scale], [1.0, -phi], draws, axis=1, zi=(phi * current)[:, None])[0]

        hit, first, area = _scan_exits(paths, current, threshold, dt)
        areas[active] += area
        finished = active[hit]
        times[finished] = (steps_done + first[hit] + 1) * dt
        exits[finished] = paths[hit, first[hit]]

        current = paths[~hit, -1]
        active = active[~hit]
        steps_done += width
    return times, areas, exits


def _coupled_exit_block(rng: np.random.Generator, rows: int, threshold: float, phi: float, scale: float,
                        dt: float, max_steps: int):
    """Exit episodes on the ``dt`` grid and on the 2 dt grid of the same paths.

    ``max_steps`` and every chunk width are even, so each chunk ends on a
    coarse point. Returns fine (times, areas, exits) then coarse ones.
    """
    fine = (np.full(rows, np.nan), np.zeros(rows), np.full(rows, np.nan))
    coarse = (np.full(rows, np.nan), np.zeros(rows), np.full(rows, np.nan))
    fine_open = np.ones(rows, dtype=bool)

    # a coarse exit is also a fine exit, so rows stay active until the coarse one
    active = np.arange(rows)
    current = np.zeros(rows)
    steps_done = 0
    while active.size and steps_done < max_steps:
        width = min(DYNKIN_CHUNK_STEPS, max_steps - steps_done)
        draws = rng.standard_normal((active.size, width))
        paths = lfilter([scale], [1.0, -phi], draws, axis=1, zi=(phi * current)[:, None])[0]

        hit, first, area = _scan_exits(paths, current, threshold, dt)
        watching = fine_open[active]
        fine[1][active[watching]] += area[watching]
        hit &= watching
        finished = active[hit]
        fine[0][finished] = (steps_done + first[hit] + 1) * dt
        fine[2][finished] = paths[hit, first[hit]]
        fine_open[finished] = False

        coarse_paths = paths[:, 1::2]
        hit, first, area = _scan_exits(coarse_paths, current, threshold, 2.0 * dt)
        coarse[1][active] += area
        finished = active[hit]
        coarse[0][finished] = (steps_done // 2 + first[hit] + 1) * 2.0 * dt
        coarse[2][finished] = coarse_paths[hit, first[hit]]

        current = paths[~hit, -1]
        active = active[~hit]
        steps_done += width
    return fine + coarse


class DiagnosticsEvaluator:
    """Turns the pooled per-trial output of an experiment into named diagnostics."""

    def __init__(self, dynkin_episodes: int = 0, seed: int = 0):
        """Initialize the evaluator.

        Args:
            dynkin_episodes (int): Episodes for the Dynkin check; 0 skips it.
            seed (int): Seed for the Dynkin episodes.
        """
        self.dynkin_episodes = dynkin_episodes
        self.seed = seed
        logger.debug("Initialized DiagnosticsEvaluator (dynkin_episodes=%d)", dynkin_episodes)

    def evaluate(
        self,
        intervals: np.ndarray,
        rewards: np.ndarray,
        overshoots: np.ndarray,
        thresholds: np.ndarray,
        model: Optional[ProcessModel] = None,
        threshold: Optional[float] = None,
        dt: Optional[float] = None,
    ) -> Dict[str, float]:
        """Compute the diagnostics table.

        Args:
            intervals (np.ndarray): Completed sampling intervals, trials concatenated in order.
            rewards (np.ndarray): Squared-error integral over each of those intervals.
            overshoots (np.ndarray): Exit overshoot at every stopping time.
            thresholds (np.ndarray): Threshold in force at every stopping time.
            model, threshold, dt: Needed only for the Dynkin check.

        Returns:
            Dict[str, float]: Named diagnostic values; flags are 0.0 or 1.0.
        """
        diagnostics: Dict[str, float] = {}
        if len(overshoots):
            eps = float(np.mean(overshoots))
            diagnostics["overshoot_mean"] = eps
            diagnostics["overshoot_bound"] = eps * (2.0 * float(np.mean(thresholds)) + eps)

        if len(intervals):
            diagnostics["renewal_ratio"] = renewal_ratio(intervals, rewards)
        if len(intervals) >= MIN_IID_INTERVALS:
            interval_check = iid_interval_diagnostic(intervals)
            diagnostics["ks_p"] = interval_check.ks_p
            diagnostics["lag1"] = interval_check.lag1
            diagnostics["lag1_degenerate"] = float(interval_check.lag1_degenerate)
        else:
            logger.debug("Only %d intervals; skipping the i.i.d. check", len(intervals))

        if self.dynkin_episodes > 0:
            dynkin = dynkin_check(model, threshold, self.dynkin_episodes, dt, self.seed)
            diagnostics["dynkin_rel_err_time"] = dynkin.rel_err_time
            diagnostics["dynkin_rel_err_area"] = dynkin.rel_err_area
        return diagnostics
