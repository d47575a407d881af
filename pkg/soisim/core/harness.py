"""Monte Carlo experiment engine.

Every trial draws its path from the (master_seed, trial) substream, streams it
through an ExitScanner in chunks and returns only per-trial summaries, so
memory stays bounded at long horizons. Results are reduced in trial order,
which keeps reports bit-identical for any number of workers.
"""

from dataclasses import dataclass
from functools import partial
from multiprocessing import Pool
from typing import List, Optional, Tuple
import logging

import numpy as np

from .config import ExperimentConfig, Mode, PolicySource
from .report import ExperimentReport, mean_with_half_width
from soisim.analytics.ou_rates import OuRateFunctions
from soisim.analytics.wiener import wiener_dff, wiener_threshold_performance, wiener_uniform_distortion
from soisim.codec.soi import empirical_rate, encode
from soisim.errors import ConfigError
from soisim.evaluators.diagnostics import DiagnosticsEvaluator
from soisim.models.base import ProcessKind
from soisim.models.paths import grid_steps, iter_path_chunks
from soisim.policies.base import ConstantThreshold
from soisim.policies.detection import ExitScanner, ResetRule, empirical_frequency
from soisim.utils.logging_config import log_duration

logger = logging.getLogger('soisim')


@dataclass(frozen=True)
class TrialResult:
    """Summary of one trial."""
    trial: int
    rate: float
    mse: float
    n_events: int
    intervals: np.ndarray
    rewards: np.ndarray
    overshoots: np.ndarray
    thresholds: np.ndarray


def run_trial(config: ExperimentConfig, trial: int) -> TrialResult:
    """Simulate trial ``trial`` of ``config`` and summarize it."""
    steps = grid_steps(config.horizon, config.dt)
    horizon = steps * config.dt
    # in control mode the plant state Y = X - X^ is the estimator's error, so
    # the cost is the estimation MSE of the same scan
    reset = ResetRule.SAMPLE if config.mode is Mode.ANALOG else ResetRule.RECONSTRUCTION
    scanner = ExitScanner(config.model, config.policy, config.dt, horizon=horizon, reset=reset, track_error=True)

    for chunk in iter_path_chunks(config.model, config.horizon, config.dt, config.master_seed, trial):
        scanner.feed(chunk)
    record = scanner.finish()

    if config.mode is Mode.ANALOG:
        rate = empirical_frequency(record, horizon)
    else:
        rate = empirical_rate(encode(record, config.policy, horizon))
    mse = scanner.error_integral() / horizon

    logger.debug("Trial %d: %d events, rate %.6g, mse %.6g", trial, len(record), rate, mse)
    return TrialResult(
        trial=trial,
        rate=rate,
        mse=mse,
        n_events=len(record),
        intervals=record.intervals,
        rewards=scanner.interval_rewards(),
        overshoots=record.overshoots if config.policy.is_threshold else np.empty(0),
        thresholds=record.thresholds if config.policy.is_threshold else np.empty(0),
    )


def analytic_reference(config: ExperimentConfig) -> Tuple[Optional[float], Optional[float], Optional[str]]:
    """Closed-form (distortion, rate, source) matching the config's policy, if one exists."""
    model = config.model
    policy = config.policy
    wiener = model.kind is ProcessKind.WIENER_FAMILY
    ou = OuRateFunctions(model.theta, model.sigma) if model.kind is ProcessKind.ORNSTEIN_UHLENBECK else None

    if config.policy_source is PolicySource.OPTIMAL and config.rate_target is not None:
        rate = config.rate_target
        distortion = wiener_dff(rate, model.c, model.a) if wiener else ou.drf(rate)
        return distortion, rate, "optimal"
    if not policy.is_threshold:
        frequency = policy.frequency
        distortion = (wiener_uniform_distortion(frequency, model.c, model.a) if wiener
                      else ou.uniform_distortion(frequency))
        return distortion, frequency, "uniform"
    if isinstance(policy, ConstantThreshold) and policy.a > 0:
        frequency, distortion = (wiener_threshold_performance(policy.a, model.c, model.a) if wiener
                                 else ou.threshold_performance(policy.a))
        return distortion, frequency, "threshold"
    return None, None, None


class ExperimentHarness:
    """Runs the trials of one ExperimentConfig and aggregates them."""

    def __init__(self, config: ExperimentConfig, evaluator: Optional[DiagnosticsEvaluator] = None):
        """
        Args:
            config (ExperimentConfig): The experiment to run.
            evaluator (DiagnosticsEvaluator, optional): Diagnostics over the pooled
                trial output. Defaults to one configured from ``config``.
        """
        if config.dynkin_episodes > 0 and not (
                config.model.kind is ProcessKind.ORNSTEIN_UHLENBECK and isinstance(config.policy, ConstantThreshold)):
            logger.error("Dynkin episodes need an OU model with a constant threshold")
            raise ConfigError("dynkin_episodes requires an OU model with a constant threshold policy")
        self.config = config
        self.evaluator = evaluator or DiagnosticsEvaluator(config.dynkin_episodes, config.master_seed)
        logger.debug("Initialized ExperimentHarness: %s / %s, %d trials, %d worker(s)",
                     config.model.kind.value, config.policy.kind.value, config.trials, config.workers)

    def _results(self) -> List[TrialResult]:
        work = partial(run_trial, self.config)
        trials = range(self.config.trials)
        if self.config.workers > 1 and self.config.trials > 1:
            with Pool(processes=min(self.config.workers, self.config.trials)) as pool:
                results = pool.map(work, trials)
        else:
            results = [work(t) for t in trials]
        return sorted(results, key=lambda r: r.trial)

    @log_duration
    def run(self) -> ExperimentReport:
        config = self.config
        results = self._results()

        rate, rate_half = mean_with_half_width([r.rate for r in results])
        mse, mse_half = mean_with_half_width([r.mse for r in results])
        degenerate = config.trials == 1
        if degenerate:
            logger.warning("A single trial gives no confidence interval; half-widths reported as 0")

        diagnostics = self.evaluator.evaluate(
            intervals=np.concatenate([r.intervals for r in results]),
            rewards=np.concatenate([r.rewards for r in results]),
            overshoots=np.concatenate([r.overshoots for r in results]),
            thresholds=np.concatenate([r.thresholds for r in results]),
            model=config.model,
            threshold=getattr(config.policy, "a", None),
            dt=config.dt,
        )
        reference, reference_rate, source = analytic_reference(config)

        report = ExperimentReport(
            trials=config.trials,
            mode=config.mode.value,
            empirical_rate=rate,
            rate_half_width=rate_half,
            empirical_mse=mse,
            mse_half_width=mse_half,
            analytic_reference=reference,
            analytic_rate=reference_rate,
            analytic_source=source,
            diagnostics=diagnostics,
            degenerate_ci=degenerate,
            per_trial_rate=tuple(r.rate for r in results),
            per_trial_mse=tuple(r.mse for r in results),
        )
        logger.info("Experiment finished: %s", report.summary())
        return report


def run_trials(config: ExperimentConfig) -> ExperimentReport:
    """Run ``config.trials`` independent trials and report rate, MSE and diagnostics."""
    return ExperimentHarness(config).run()
