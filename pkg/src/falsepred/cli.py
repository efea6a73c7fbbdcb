"""Command-line interface.

Subcommands map one-to-one onto the harness entry points:

* ``table1``       batched stability table plus exit/hop statistics
* ``eq8``          Monte Carlo check of the false-predictor census expectation
* ``survival``     mean survival of a randomly chosen false predictor
* ``regret``       per-step regret trace of a single history (small n)
* ``monitor-demo`` rule-of-thumb verdicts and masquerading false predictors
* ``history``      dump one seeded history as JSON

Exit codes: 0 success, 2 invalid configuration, 3 resource guard tripped,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .errors import ConfigError, GuardError
from .harness import (
    ExperimentConfig,
    run_eq8,
    run_history_dump,
    run_monitor_demo,
    run_regret,
    run_survival,
    run_table1,
)
from .learner import RestartPolicy

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GUARD = 3
EXIT_IO = 4

_POLICY_ALIASES = {
    "warm": RestartPolicy.WARM_START,
    "warm_start": RestartPolicy.WARM_START,
    "initial": RestartPolicy.RESTART_FROM_INITIAL,
    "restart_from_initial": RestartPolicy.RESTART_FROM_INITIAL,
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--n", type=int, help="number of redundant variables")
    p.add_argument("--alpha", type=float, help="coupling probability of x_a to x_0")
    p.add_argument("--seed", type=int, help="base seed")
    p.add_argument("--histories", type=int, help="number of independent histories")
    p.add_argument("--max-m", type=int, help="training samples per history")
    p.add_argument("--batch", type=int, help="batch width for the stability table")
    p.add_argument(
        "--restart-policy",
        choices=sorted(_POLICY_ALIASES),
        help="hill-climb start per step: warm (previous selection) or initial",
    )
    p.add_argument(
        "--allow-x0",
        choices=["true", "false"],
        help="whether refinements may add x_0 to the body",
    )
    p.add_argument(
        "--life-attribution",
        choices=["birth", "death", "span"],
        help="batch a completed life by its birth m, death m, or every batch it spans",
    )
    p.add_argument("--parallelism", type=int, help="worker processes (0 = all cores)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", choices=["csv", "json"], help="tabular output format")


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    base = {}
    if args.config:
        try:
            with open(args.config) as fh:
                base = json.load(fh)
        except OSError as exc:
            raise OSError(f"cannot read config file {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {args.config} is not valid JSON: {exc}") from exc
    config = ExperimentConfig.from_dict(base)

    world = config.world
    if args.n is not None:
        world = dataclasses.replace(world, n_redundant=args.n)
    if args.alpha is not None:
        world = dataclasses.replace(world, alpha=args.alpha)
    if args.seed is not None:
        world = dataclasses.replace(world, seed=args.seed)

    learner = config.learner
    if args.restart_policy is not None:
        learner = dataclasses.replace(
            learner, restart_policy=_POLICY_ALIASES[args.restart_policy]
        )
    if args.allow_x0 is not None:
        learner = dataclasses.replace(learner, allow_x0_in_body=args.allow_x0 == "true")

    overrides = {"world": world, "learner": learner}
    if args.histories is not None:
        overrides["histories"] = args.histories
    if args.max_m is not None:
        overrides["max_m"] = args.max_m
    if args.batch is not None:
        overrides["batch"] = args.batch
    if args.life_attribution is not None:
        overrides["life_attribution"] = args.life_attribution
    if args.parallelism is not None:
        overrides["parallelism"] = args.parallelism
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.format is not None:
        overrides["format"] = args.format
    return dataclasses.replace(config, **overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="falsepred",
        description="Stability laboratory for an online structure learner "
        "and its false predictors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table1", help="batched stability table over many histories")
    _add_common(p)

    p = sub.add_parser("eq8", help="Monte Carlo census of surviving false predictors")
    _add_common(p)
    p.add_argument("--s", type=int, required=True, help="structure size to census")
    p.add_argument("--m", type=int, required=True, help="training-set size per trial")
    p.add_argument("--trials", type=int, default=200, help="Monte Carlo trials")

    p = sub.add_parser("survival", help="mean survival of a sampled false predictor")
    _add_common(p)
    p.add_argument("--s", type=int, required=True, help="structure size to sample from")
    p.add_argument("--warmup-m", type=int, required=True, help="warmup training size")
    p.add_argument("--trials", type=int, default=500, help="survival trials")

    p = sub.add_parser("regret", help="regret trace of one history (small n)")
    _add_common(p)

    p = sub.add_parser("monitor-demo", help="rule-of-thumb verdicts and masquerades")
    _add_common(p)

    p = sub.add_parser("history", help="dump one seeded history as JSON")
    _add_common(p)
    p.add_argument("--index", type=int, default=0, help="history index to dump")

    return parser


def _dispatch(args: argparse.Namespace) -> None:
    config = _build_config(args)
    if args.command == "table1":
        report = run_table1(config)
        print(f"histories={config.histories} exits={report.exit_count}", end="")
        if report.exit_mean is not None:
            print(f" exit_mean={report.exit_mean:.2f} exit_sd={report.exit_sd:.2f}", end="")
        if report.hop_mean is not None:
            print(
                f" hop_mean={report.hop_mean:.3f}"
                f" hop_unit_fraction={report.hop_unit_fraction:.3f}",
                end="",
            )
        print()
    elif args.command == "eq8":
        report = run_eq8(config, args.s, args.m, args.trials)
        row = report.eq8[0]
        print(
            f"s={row['s']} m={row['m']} analytic={row['analytic']:.6g} "
            f"mc_mean={row['mc_mean']:.6g} rel_err={row['rel_err']:.4f}"
        )
    elif args.command == "survival":
        report = run_survival(config, args.s, args.warmup_m, args.trials)
        print(f"mean_survival={report.survival_mean:.4f}")
    elif args.command == "regret":
        run_regret(config)
        print(f"wrote regret trace for one history of {config.max_m} samples")
    elif args.command == "monitor-demo":
        report = run_monitor_demo(config)
        print(f"masquerading approvals: {len(report.masquerades)}")
    elif args.command == "history":
        payload = run_history_dump(config, args.index)
        print(
            f"history {args.index}: {len(payload['steps'])} steps,"
            f" exit_m={payload['exit_m']}"
        )
    else:  # pragma: no cover - argparse enforces the choices
        raise ConfigError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _dispatch(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GuardError as exc:
        print(f"guard error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
