"""Command-line entry point: single-instance solves and scenario sweeps."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .ao import solve_instance
from .channel import gen_channel_set, trial_stream
from .experiments import (
    SWEEP_RUNNERS,
    ConfigError,
    ScenarioConfig,
    SweepError,
    apply_overrides,
    read_config,
)
from .sdp import SdpSolverError

EXIT_OK = 0
EXIT_BAD_CONFIG = 2
EXIT_SOLVER_FAILURE = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarsec",
        description="Joint beamforming/polarforming secrecy optimization",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value configuration file")
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a configuration key (repeatable)",
    )
    common.add_argument("--seed", type=int, help="override master_seed")
    common.add_argument("--trials", type=int, help="override trials")

    solve = sub.add_parser("solve", parents=[common], help="solve one instance")
    solve.add_argument("--n", type=int, help="override n_bs")
    solve.add_argument("--snr-db", type=float, help="override snr_db")
    solve.add_argument("--trial", type=int, default=0, help="trial index (default 0)")
    solve.add_argument("--trace-out", help="write the iteration trace as JSON")

    sweep = sub.add_parser("sweep", parents=[common], help="run a scenario sweep")
    sweep.add_argument(
        "--scenario",
        required=True,
        choices=sorted(SWEEP_RUNNERS),
        help="which study to run",
    )
    sweep.add_argument("--out", required=True, help="output CSV path")
    sweep.add_argument(
        "--values",
        help="comma-separated sweep grid overriding the scenario default",
    )
    sweep.add_argument("--jobs", type=int, help="worker processes (default: cores)")
    return parser


def _load_config(args) -> ScenarioConfig:
    cfg = read_config(args.config) if args.config else ScenarioConfig()
    cfg = apply_overrides(cfg, args.overrides)
    direct = {}
    if args.seed is not None:
        direct["master_seed"] = args.seed
    if args.trials is not None:
        direct["trials"] = args.trials
    if getattr(args, "n", None) is not None:
        direct["n_bs"] = args.n
    if getattr(args, "snr_db", None) is not None:
        direct["snr_db"] = args.snr_db
    if direct:
        cfg = apply_overrides(cfg, [f"{k}={v}" for k, v in direct.items()])
    return cfg


def _cmd_solve(args) -> int:
    cfg = _load_config(args)
    stream = trial_stream(cfg.master_seed, args.trial)
    channels = gen_channel_set(cfg, stream)
    trace = solve_instance(channels, cfg, stream)
    print(
        f"instance: n_bs={cfg.n_bs} snr_db={cfg.snr_db:g} seed={cfg.master_seed} "
        f"trial={args.trial}"
    )
    print("iter  rate_after_beam  rate_after_polar  upper_bound")
    for it in trace.iterations:
        print(
            f"{it.index:4d}  {it.rate_after_beamforming:15.9f}  "
            f"{it.rate_after_polarforming:16.9f}  {it.upper_bound_rate:11.9f}"
        )
    status = "converged" if trace.converged else "iteration cap reached"
    print(f"{status}: secrecy rate {trace.final_rate:.9f} bps/Hz")
    if args.trace_out:
        payload = {
            "n_bs": cfg.n_bs,
            "snr_db": cfg.snr_db,
            "master_seed": cfg.master_seed,
            "trial": args.trial,
            "converged": trace.converged,
            "iterations": [
                {
                    "index": it.index,
                    "rate_after_beamforming": it.rate_after_beamforming,
                    "rate_after_polarforming": it.rate_after_polarforming,
                    "upper_bound_rate": it.upper_bound_rate,
                }
                for it in trace.iterations
            ],
            "final_psv": list(trace.final_psv.thetas),
            "final_w_real": list(np.real(trace.final_w.w)),
            "final_w_imag": list(np.imag(trace.final_w.w)),
        }
        with open(args.trace_out, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2)
            handle.write("\n")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _load_config(args)
    runner = SWEEP_RUNNERS[args.scenario]
    if args.values is not None:
        try:
            grid = [float(v) for v in args.values.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"cannot parse --values: {exc}") from exc
        result = runner(cfg, grid, jobs=args.jobs)
    else:
        result = runner(cfg, jobs=args.jobs)
    result.write_csv(args.out)
    points = len({row.sweep_value for row in result.rows})
    print(f"wrote {args.out}: {points} points x 4 schemes, {cfg.trials} trials each")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        return _cmd_sweep(args)
    except (ConfigError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except (SdpSolverError, SweepError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER_FAILURE


if __name__ == "__main__":
    sys.exit(main())
