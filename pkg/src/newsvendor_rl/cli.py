"""Command-line entry point: ``solve``, ``train``, and ``oracle`` subcommands.

Exit codes: 0 on success, 1 for usage/config problems, 2 for runtime or
numeric failures mid-run.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .analytic import (
    EconomicParams,
    critical_fractile,
    expected_profit,
    mc_expected_profit,
    optimal_quantity,
    profit_curve,
)
from .config import ConfigError, ExperimentConfig, load_experiment_config
from .distributions import distribution_from_dict
from .trainer import (
    evaluate,
    run,
    write_eval_actions,
    write_learning_curve,
    write_run_summary,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; this artifact reserves 2 for runtime.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_dist(text: str):
    try:
        return distribution_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--dist is not valid JSON: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"--dist: {exc}") from exc


def _parse_grid(text: str) -> np.ndarray:
    try:
        low, high, step = (float(part) for part in text.split(":"))
    except ValueError as exc:
        raise ConfigError(f"--grid must look like low:high:step, got {text!r}") from exc
    if step <= 0 or high < low:
        raise ConfigError(f"--grid must have step > 0 and high >= low, got {text!r}")
    return np.arange(low, high + 0.5 * step, step)


def cmd_solve(args) -> int:
    dist = _parse_dist(args.dist)
    params = EconomicParams(args.unit_profit, args.unit_cost)
    fractile = critical_fractile(params)
    q = optimal_quantity(dist, params)
    result = {
        "fractile": fractile,
        "optimal_q": q,
        "expected_profit_at_q": expected_profit(dist, q, params),
    }
    print(json.dumps(result))
    return EXIT_OK


def cmd_oracle(args) -> int:
    dist = _parse_dist(args.dist)
    params = EconomicParams(args.unit_profit, args.unit_cost)
    grid = _parse_grid(args.grid)
    rng = np.random.default_rng(args.seed)
    curve = profit_curve(dist, params, grid, args.n, rng)
    lines = ["q,estimate,std_error"]
    for point in curve:
        se = "" if math.isnan(point.std_error) else repr(point.std_error)
        lines.append(f"{point.quantity},{point.estimate!r},{se}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_train(args) -> int:
    config = load_experiment_config(args.config)
    out_root = Path(args.out) if args.out else Path(config.output_dir)
    seeds = (args.seed,) if args.seed is not None else config.seeds

    per_seed_means: list[list[float]] = []
    optima: list[float] | None = None
    for seed in seeds:
        out_dir = out_root / f"seed_{seed}"
        out_dir.mkdir(parents=True, exist_ok=True)
        metrics = run(config.train_config(seed))
        write_learning_curve(metrics, out_dir / "learning_curve.csv")
        write_eval_actions(metrics, out_dir / "eval_actions.csv")
        write_run_summary(metrics, config.raw, out_dir / "run_summary.json")
        stats = evaluate(metrics)
        per_seed_means.append([s.mean_action for s in stats])
        optima = [s.analytic_optimum for s in stats]
        if not args.quiet:
            means = " ".join(f"{s.mean_action:7.2f}" for s in stats)
            print(
                f"seed {seed}: eval mean actions per day [{means}] "
                f"({metrics.wall_time_seconds:.1f}s)"
            )

    medians = [float(np.median(col)) for col in zip(*per_seed_means)]
    summary = {
        "seeds": list(seeds),
        "per_day_median_mean_action": medians,
        "per_day_analytic_optimum": optima,
        "per_seed_mean_actions": per_seed_means,
    }
    summary_path = out_root / "median_summary.json"
    summary_path.write_text(json.dumps(summary, indent=2) + "\n")
    if not args.quiet:
        print(f"wrote {summary_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="newsvendor-rl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="critical-fractile optimum for one distribution")
    solve.add_argument("--dist", required=True, help='e.g. \'{"kind":"normal","mu":50,"sigma":20}\'')
    solve.add_argument("--unit-profit", type=float, required=True)
    solve.add_argument("--unit-cost", type=float, required=True)
    solve.set_defaults(fn=cmd_solve)

    oracle = sub.add_parser("oracle", help="Monte Carlo profit curve over a stock grid")
    oracle.add_argument("--dist", required=True)
    oracle.add_argument("--unit-profit", type=float, required=True)
    oracle.add_argument("--unit-cost", type=float, required=True)
    oracle.add_argument("--grid", default="0:100:1", help="low:high:step (default 0:100:1)")
    oracle.add_argument("--n", type=int, default=100_000, help="samples per grid point")
    oracle.add_argument("--seed", type=int, default=0)
    oracle.add_argument("--out", help="CSV path (default stdout)")
    oracle.set_defaults(fn=cmd_oracle)

    train = sub.add_parser("train", help="run a config-driven experiment")
    train.add_argument("--config", required=True, help="experiment JSON file")
    train.add_argument("--out", help="output directory (overrides config output_dir)")
    train.add_argument("--seed", type=int, help="run this single seed instead of the config list")
    train.add_argument("--quiet", action="store_true")
    train.set_defaults(fn=cmd_train)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
