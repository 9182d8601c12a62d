"""Command-line entry point.

Exit codes: 0 success, 2 invalid configuration, 3 runtime failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from typing import Optional, Sequence

from natureopt.algorithms import REGISTRY
from natureopt.benchmarks import BENCHMARKS
from natureopt.harness.config import ConfigError, config_from_dict, load_config
from natureopt.harness.experiment import run_experiment

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="natureopt", description="Run seeded metaheuristic benchmark experiments.")
    parser.add_argument("--config", help="JSON experiment config; flags below override it")
    parser.add_argument("--algo", help="algorithm name")
    parser.add_argument("--params", help="algorithm parameters as a JSON object")
    parser.add_argument("--problem", help="benchmark name")
    parser.add_argument("--dim", type=int, help="problem dimension")
    parser.add_argument("--pop", type=int, help="population size")
    parser.add_argument("--evals", type=int, help="maximum objective evaluations")
    parser.add_argument("--iters", type=int, help="maximum iterations")
    parser.add_argument("--seed", type=int, help="base seed (unsigned 64-bit)")
    parser.add_argument("--repeats", type=int, help="number of seeded runs")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--trace-every", type=int, help="record every k-th iteration")
    parser.add_argument("--threshold", type=float, help="success threshold above the known optimum")
    parser.add_argument("--workers", type=int, help="worker processes for repeats")
    parser.add_argument("--list-algorithms", action="store_true", help="list algorithms and their defaults")
    parser.add_argument("--list-problems", action="store_true", help="list benchmark problems")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    mapping = {
        "algorithm": args.algo, "problem": args.problem, "dimension": args.dim,
        "population": args.pop, "max_evaluations": args.evals, "max_iterations": args.iters,
        "seed": args.seed, "repeats": args.repeats, "output_dir": args.out,
        "trace_every": args.trace_every, "success_threshold": args.threshold, "workers": args.workers,
    }
    out = {k: v for k, v in mapping.items() if v is not None}
    if args.params is not None:
        out["params"] = json.loads(args.params)
    return out


def _list_algorithms() -> None:
    for name, (_, params_cls) in REGISTRY.items():
        defaults = ", ".join(f"{f.name}={f.default!r}" for f in dataclasses.fields(params_cls))
        print(f"{name}: {defaults}")


def _list_problems() -> None:
    for name, d in BENCHMARKS.items():
        dim = d.fixed_dimension if d.fixed_dimension else "any"
        print(f"{name}: dim={dim} bounds=[{d.lower}, {d.upper}] optimum={d.optimum_value} ({d.notes})")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.list_algorithms or args.list_problems:
        if args.list_algorithms:
            _list_algorithms()
        if args.list_problems:
            _list_problems()
        return EXIT_OK
    try:
        overrides = _overrides(args)
        if args.config:
            config = load_config(args.config, overrides)
        else:
            if "algorithm" in overrides and "hybrid" not in overrides:
                overrides.setdefault("params", {})
            config = config_from_dict(overrides)
    except json.JSONDecodeError as exc:
        print(f"error: --params is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: cannot read {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    try:
        _, report = run_experiment(config)
    except OSError as exc:
        print(f"error: cannot write {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001 - any failure inside a run is a runtime error
        print(f"error: run failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(
        f"{config.label} on {config.problem} (dim {config.dimension}), {report.repeats} runs: "
        f"best {report.best:.6g}  median {report.median:.6g}  worst {report.worst:.6g}  "
        f"success {report.success_rate:.2f}  -> {config.output_dir}"
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
