"""Command-line interface.

    soisim simulate  --config exp.cfg [--seed N] [--out report.json]
    soisim drf-sweep --config exp.cfg --rates 0.5,1,2 --out sweep.csv
    soisim control   --config exp.cfg --out traj.csv --impulses imp.csv
    soisim dynkin    --theta 1 --sigma 1 --threshold 1 --episodes 10000 --dt 1e-4 [--refine]

Exit codes: 0 on success, 2 on configuration or input errors, 3 on numeric failures.
"""

from pathlib import Path
from typing import List, Optional
import argparse
import logging
import sys

from soisim.codec.stream_io import write_stream
from soisim.control.export import export_trajectory
from soisim.control.impulse import decompose_control
from soisim.control.loop import control_cost, run_control
from soisim.core.config import load_config
from soisim.core.harness import run_trials
from soisim.core.sweep import drf_sweep
from soisim.errors import ConfigError, NumericError, SoisimError
from soisim.evaluators.diagnostics import DynkinResult, dynkin_check, dynkin_refinement
from soisim.models.ornstein_uhlenbeck import OrnsteinUhlenbeck
from soisim.utils.logging_config import setup_logging

logger = logging.getLogger('soisim')

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def parse_rates(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"--rates must be comma-separated numbers, got {text!r}") from e


def _simulate(args: argparse.Namespace) -> int:
    config = load_config(args.config, seed=args.seed, trials=args.trials, workers=args.workers)
    report = run_trials(config)
    if args.out:
        Path(args.out).write_text(report.to_json(), encoding="utf-8")
        logger.info("Report written to %s", args.out)
    else:
        print(report.to_json())
    return EXIT_OK


def _drf_sweep(args: argparse.Namespace) -> int:
    config = load_config(args.config, seed=args.seed, trials=args.trials, workers=args.workers)
    table = drf_sweep(config.model, parse_rates(args.rates), config)
    if args.out:
        table.to_csv(args.out, index=False, float_format="%.12g")
        logger.info("Sweep table written to %s", args.out)
    else:
        print(table.to_csv(index=False, float_format="%.12g"), end="")
    return EXIT_OK


def _control(args: argparse.Namespace) -> int:
    config = load_config(args.config, seed=args.seed)
    traj = run_control(config.model, config.policy, config.horizon, config.dt, config.master_seed)
    decomp = decompose_control(traj)
    export_trajectory(traj, decomp, args.out, args.impulses)
    if args.stream:
        write_stream(traj.stream, args.stream)
    print(f"cost={control_cost(traj):.9g} codewords={len(traj.event_times)}")
    return EXIT_OK


def _print_dynkin(result: DynkinResult, prefix: str = "") -> None:
    for name in ("rel_err_time", "rel_err_area", "grid_err_time", "grid_err_area"):
        print(f"{prefix}{name}={getattr(result, name):.6g}")


def _dynkin(args: argparse.Namespace) -> int:
    model = OrnsteinUhlenbeck(theta=args.theta, sigma=args.sigma)
    if not args.refine:
        _print_dynkin(dynkin_check(model, args.threshold, args.episodes, args.dt, args.seed))
        return EXIT_OK
    refinement = dynkin_refinement(model, args.threshold, args.episodes, args.dt, args.seed)
    _print_dynkin(refinement.coarse, "coarse.")
    _print_dynkin(refinement.fine, "fine.")
    print(f"time_reduction={refinement.time_reduction:.6g}")
    print(f"area_reduction={refinement.area_reduction:.6g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="soisim",
                                     description="Causal rate-constrained sampling and SOI coding simulator.")
    parser.add_argument("--verbose", "-v", action="store_true", help="enable debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="run one experiment config")
    simulate.add_argument("--config", required=True)
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--trials", type=int)
    simulate.add_argument("--workers", type=int)
    simulate.add_argument("--out", help="JSON report path; stdout if omitted")
    simulate.set_defaults(handler=_simulate)

    sweep = commands.add_parser("drf-sweep", help="distortion-rate sweep under optimal thresholds")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--rates", required=True, help="comma-separated rates, ascending")
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--trials", type=int)
    sweep.add_argument("--workers", type=int)
    sweep.add_argument("--out", help="CSV path; stdout if omitted")
    sweep.set_defaults(handler=_drf_sweep)

    control = commands.add_parser("control", help="export one closed-loop trajectory")
    control.add_argument("--config", required=True)
    control.add_argument("--seed", type=int)
    control.add_argument("--out", required=True, help="trajectory CSV (t, x, z, y)")
    control.add_argument("--impulses", required=True, help="impulse CSV (time, weight)")
    control.add_argument("--stream", help="also write the SOI stream here")
    control.set_defaults(handler=_control)

    dynkin = commands.add_parser("dynkin", help="check the OU Dynkin identities")
    dynkin.add_argument("--theta", type=float, required=True)
    dynkin.add_argument("--sigma", type=float, required=True)
    dynkin.add_argument("--threshold", type=float, required=True)
    dynkin.add_argument("--episodes", type=int, required=True)
    dynkin.add_argument("--dt", type=float, required=True)
    dynkin.add_argument("--seed", type=int, default=0)
    dynkin.add_argument("--refine", action="store_true",
                        help="also run at dt / 2 on the same draws and report the reduction")
    dynkin.set_defaults(handler=_dynkin)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(verbose=args.verbose)
    try:
        return args.handler(args)
    except NumericError as e:
        logger.error("Numeric failure: %s", e)
        return EXIT_NUMERIC
    except (SoisimError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
