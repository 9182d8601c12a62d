"""Seeded repeated runs of one configuration."""

from __future__ import annotations

import datetime as _dt
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from natureopt.algorithms import Budget, make_algorithm, run
from natureopt.benchmarks import get_benchmark
from natureopt.harness.config import ExperimentConfig
from natureopt.harness.io import write_summary, write_trace
from natureopt.hybrid import run_hybrid
from natureopt.records import RunRecord, SummaryReport, summarize
from natureopt.sampling import RngStream

logger = logging.getLogger(__name__)


def run_seed(config: ExperimentConfig, run_index: int) -> int:
    """Seed of run ``run_index``, a function of the base seed and the index only."""
    return RngStream(config.seed).child_seed(run_index)


def execute_run(config: ExperimentConfig, run_index: int) -> RunRecord:
    problem = get_benchmark(config.problem).problem(config.dimension)
    budget = Budget(config.max_evaluations, config.max_iterations)
    seed = run_seed(config, run_index)
    rng = RngStream(seed)
    if config.hybrid is None:
        algorithm = make_algorithm(config.algorithm, config.params)
        record = run(algorithm, problem, config.population, budget, rng,
                     run_id=run_index, trace_every=config.trace_every)
    else:
        record = run_hybrid(config.hybrid, problem, budget, rng, config.population,
                            run_id=run_index, trace_every=config.trace_every)
    return record


def trace_path(output_dir: str | Path, run_id: int) -> Path:
    return Path(output_dir) / f"trace_{run_id:04d}.csv"


def summary_path(output_dir: str | Path) -> Path:
    return Path(output_dir) / "summary.json"


def build_report(config: ExperimentConfig, records: list[RunRecord]) -> SummaryReport:
    target = get_benchmark(config.problem).optimum_value
    report = summarize(
        [r.best_fitness for r in records],
        config.success_threshold,
        target_value=target,
        total_evaluations=sum(r.evaluations for r in records),
    )
    report.config = config.to_dict()
    report.runs = [
        {
            "run_id": r.run_id,
            "seed": r.seed,
            "final_fitness": r.best_fitness,
            "evaluations": r.evaluations,
            "iterations": r.iterations,
            "best_position": [float(v) for v in r.best_position],
        }
        for r in records
    ]
    return report


def run_experiment(config: ExperimentConfig, write: bool = True) -> tuple[list[RunRecord], SummaryReport]:
    """Run ``config.repeats`` seeded runs, persist traces and the summary.

    Runs are distributed over ``config.workers`` processes; results are
    ordered by run index, so output does not depend on scheduling.

    Raises:
        OSError: the output directory or a file cannot be written.
    """
    started = time.perf_counter()
    indices = range(config.repeats)
    if config.workers > 1 and config.repeats > 1:
        with ProcessPoolExecutor(max_workers=min(config.workers, config.repeats)) as pool:
            records = list(pool.map(execute_run, [config] * config.repeats, indices))
    else:
        records = [execute_run(config, i) for i in indices]
    for r in records:
        logger.info("run %d seed %d: best %.6g after %d evaluations", r.run_id, r.seed, r.best_fitness, r.evaluations)

    report = build_report(config, records)
    report.informational = {
        "created_utc": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "run_wall_time_seconds": [r.wall_time for r in records],
        "total_wall_time_seconds": time.perf_counter() - started,
    }
    if write:
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        for r in records:
            write_trace(r, trace_path(out, r.run_id))
        write_summary(report, summary_path(out))
    return records, report
