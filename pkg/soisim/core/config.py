"""Experiment configuration.

Config files are flat ``key = value`` text::

    # standard Wiener process at one bit per second
    model = wiener
    c = 1
    a = 1
    policy = optimal
    rate = 1
    horizon = 2000
    dt = 1e-4
    trials = 64
    seed = 7
"""

from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union
import logging
import os

from soisim.errors import ConfigError, DomainError
from soisim.models.base import ProcessModel
from soisim.models.model_factory import ModelFactory
from soisim.policies.base import ConstantThreshold, ThresholdPolicy, UniformSchedule
from soisim.policies.optimal import optimal_policy

logger = logging.getLogger('soisim')

MAX_GRID_POINTS = 1e9

MODEL_KEYS = {"model", "c", "a", "b", "theta", "mu", "sigma"}
POLICY_KEYS = {"policy", "threshold", "period", "frequency", "rate"}
RUN_KEYS = {"horizon", "dt", "trials", "seed", "mode", "workers", "dynkin_episodes"}
KNOWN_KEYS = MODEL_KEYS | POLICY_KEYS | RUN_KEYS
REQUIRED_KEYS = {"model", "policy", "horizon", "dt"}


class Mode(str, Enum):
    """What each trial measures."""
    ESTIMATION = "estimation"
    ANALOG = "analog"
    CONTROL = "control"


class PolicySource(str, Enum):
    OPTIMAL = "optimal"
    CONSTANT = "constant"
    UNIFORM = "uniform"


def default_workers() -> int:
    """Worker count from ``SOISIM_WORKERS``, else 1."""
    raw = os.getenv("SOISIM_WORKERS")
    if not raw:
        return 1
    try:
        workers = int(raw)
    except ValueError as e:
        raise ConfigError(f"SOISIM_WORKERS must be an integer, got {raw!r}") from e
    if workers < 1:
        raise ConfigError(f"SOISIM_WORKERS must be at least 1, got {workers}")
    return workers


@dataclass(frozen=True)
class ExperimentConfig:
    """A fully resolved experiment.

    Attributes:
        model (ProcessModel): Source process.
        policy (ThresholdPolicy): Resolved sampling policy.
        horizon (float): Time horizon T of each trial.
        dt (float): Grid step.
        trials (int): Number of independent trials.
        master_seed (int): Seed whose substreams drive the trials.
        mode (Mode): Estimation, analog estimation or control.
        rate_target (float, optional): Target rate R in bits per second.
        policy_source (PolicySource): How ``policy`` was specified.
        workers (int): Worker processes for the trials.
        dynkin_episodes (int): Exit episodes for the Dynkin diagnostic; 0 skips it.
    """
    model: ProcessModel
    policy: ThresholdPolicy
    horizon: float
    dt: float
    trials: int = 1
    master_seed: int = 0
    mode: Mode = Mode.ESTIMATION
    rate_target: Optional[float] = None
    policy_source: PolicySource = PolicySource.CONSTANT
    workers: int = 1
    dynkin_episodes: int = 0

    def __post_init__(self):
        if not (self.dt > 0 and self.horizon >= self.dt):
            raise ConfigError(f"Need 0 < dt <= horizon, got dt={self.dt}, horizon={self.horizon}")
        if self.horizon / self.dt > MAX_GRID_POINTS:
            logger.error("horizon/dt = %.3g exceeds %.0e grid points", self.horizon / self.dt, MAX_GRID_POINTS)
            raise ConfigError(f"horizon/dt must not exceed {MAX_GRID_POINTS:.0e}")
        if self.trials < 1 or self.workers < 1 or self.dynkin_episodes < 0:
            raise ConfigError("trials and workers must be positive, dynkin_episodes non-negative")
        if self.master_seed < 0:
            raise ConfigError(f"Seeds are unsigned, got {self.master_seed}")
        if self.rate_target is not None and not self.rate_target > 0:
            raise ConfigError(f"Target rate must be positive, got {self.rate_target}")
        if not self.policy.is_threshold and self.mode is not Mode.ANALOG:
            logger.error("Uniform schedules carry no SOI bits; mode %s needs a threshold policy", self.mode.value)
            raise ConfigError(f"Mode '{self.mode.value}' requires a threshold policy; "
                              "run uniform schedules in analog mode")

    def with_overrides(self, **changes: Any) -> "ExperimentConfig":
        return replace(self, **changes)


def parse_config_text(text: str) -> Dict[str, str]:
    """Parse ``key = value`` lines into a lower-cased mapping."""
    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            logger.error("Config line %d is not 'key = value': %r", number, raw)
            raise ConfigError(f"Config line {number} is not 'key = value': {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key not in KNOWN_KEYS:
            logger.error("Unknown config key on line %d: %s", number, key)
            raise ConfigError(f"Unknown config key '{key}' on line {number}")
        if key in values:
            raise ConfigError(f"Duplicate config key '{key}' on line {number}")
        values[key] = value
    return values


def _number(values: Mapping[str, Any], key: str, cast=float, default: Any = None) -> Any:
    if key not in values or values[key] is None:
        return default
    try:
        return cast(values[key])
    except (TypeError, ValueError) as e:
        logger.error("Config key %s has a non-numeric value %r", key, values[key])
        raise ConfigError(f"Config key '{key}' must be numeric, got {values[key]!r}") from e


def resolve_policy(model: ProcessModel, values: Mapping[str, Any]) -> ThresholdPolicy:
    """Build the policy named by ``values['policy']``.

    Raises:
        ConfigError: Missing parameters or a policy the model cannot pair with.
    """
    source = str(values.get("policy", "")).strip().lower()
    try:
        if source == PolicySource.OPTIMAL.value:
            rate = _number(values, "rate")
            if rate is None:
                raise ConfigError("policy = optimal needs a 'rate'")
            return optimal_policy(model, rate)
        elif source == PolicySource.CONSTANT.value:
            threshold = _number(values, "threshold")
            if threshold is None:
                raise ConfigError("policy = constant needs a 'threshold'")
            return ConstantThreshold(threshold)
        elif source == PolicySource.UNIFORM.value:
            period = _number(values, "period")
            frequency = _number(values, "frequency")
            if (period is None) == (frequency is None):
                raise ConfigError("policy = uniform needs exactly one of 'period' or 'frequency'")
            if period is None:
                if not frequency > 0:
                    raise ConfigError(f"Uniform frequency must be positive, got {frequency}")
                period = 1.0 / frequency
            return UniformSchedule(period)
    except DomainError as e:
        logger.error("Cannot build policy %s: %s", source, e)
        raise ConfigError(f"Cannot build policy '{source}': {e}") from e

    logger.error("Unknown policy: %s", source)
    raise ConfigError(f"Unknown policy '{source}', expected 'optimal', 'constant' or 'uniform'")


def config_from_mapping(values: Mapping[str, Any]) -> ExperimentConfig:
    """Build an ExperimentConfig from a flat mapping of config keys."""
    missing = REQUIRED_KEYS - set(values)
    if missing:
        logger.error("Config is missing required keys: %s", sorted(missing))
        raise ConfigError(f"Config is missing required keys: {', '.join(sorted(missing))}")

    model = ModelFactory.create_model({k: v for k, v in values.items() if k in MODEL_KEYS})
    policy = resolve_policy(model, values)

    mode_name = str(values.get("mode", Mode.ESTIMATION.value)).strip().lower()
    try:
        mode = Mode(mode_name)
    except ValueError as e:
        raise ConfigError(f"Unknown mode '{mode_name}', expected 'estimation', 'analog' or 'control'") from e

    workers = _number(values, "workers", int)
    config = ExperimentConfig(
        model=model,
        policy=policy,
        horizon=_number(values, "horizon"),
        dt=_number(values, "dt"),
        trials=_number(values, "trials", int, 1),
        master_seed=_number(values, "seed", int, 0),
        mode=mode,
        rate_target=_number(values, "rate"),
        policy_source=PolicySource(str(values["policy"]).strip().lower()),
        workers=workers if workers is not None else default_workers(),
        dynkin_episodes=_number(values, "dynkin_episodes", int, 0),
    )
    logger.debug("Loaded config: %s", config)
    return config


def load_config(path: Union[str, Path], **overrides: Any) -> ExperimentConfig:
    """Read a config file; keyword ``overrides`` replace file values (None is ignored)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        logger.error("Cannot read config %s: %s", path, e)
        raise ConfigError(f"Cannot read config '{path}': {e}") from e
    values: Dict[str, Any] = parse_config_text(text)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return config_from_mapping(values)
