"""Trace CSV and summary JSON readers and writers.

Trace files have the header ``run_id,seed,iteration,evaluations,best_fitness``
and one row per recorded iteration. Floats are written with 17 significant
digits, which round-trips IEEE doubles exactly.

The summary is a JSON document with these top-level keys:

``schema_version``
    Integer, currently 1.
``config``
    Echo of the experiment configuration.
``summary``
    ``best``, ``worst``, ``mean``, ``median``, ``std`` (population standard
    deviation) of the final fitness over repeats, ``success_rate``,
    ``success_threshold``, ``target_value``, ``repeats``, ``total_evaluations``.
``runs``
    Per run: ``run_id``, ``seed``, ``final_fitness``, ``evaluations``,
    ``iterations``, ``best_position``.
``informational``
    Timestamps and wall-clock durations. The only non-deterministic section.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any

from natureopt.records import RunRecord, SummaryReport, TraceRow

TRACE_HEADER = ["run_id", "seed", "iteration", "evaluations", "best_fitness"]
SCHEMA_VERSION = 1


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_trace(record: RunRecord, path: str | Path) -> None:
    """Write ``record``'s trace as CSV, then re-read it and check the best column."""
    path = Path(path)
    seed = "" if record.seed is None else str(record.seed)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for row in record.trace:
            writer.writerow([record.run_id, seed, row.iteration, row.evaluations, _fmt(row.best_fitness)])
    problems = lint_trace(path)
    if problems:
        raise ValueError(f"{path}: " + "; ".join(problems))


def read_trace(path: str | Path) -> RunRecord:
    """Parse a trace CSV into a :class:`RunRecord` (trace, run id and seed only)."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != TRACE_HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no trace rows")
    run_id = int(rows[0][0])
    seed = int(rows[0][1]) if rows[0][1] else None
    trace = [TraceRow(int(r[2]), int(r[3]), float(r[4])) for r in rows]
    last = trace[-1]
    return RunRecord(run_id=run_id, seed=seed, trace=trace, best_fitness=last.best_fitness,
                     evaluations=last.evaluations, iterations=last.iteration)


def lint_trace(path: str | Path) -> list[str]:
    """Invariant check on a written trace; returns a list of problems (empty if clean)."""
    record = read_trace(path)
    problems = []
    best = record.best_column()
    for i, (a, b) in enumerate(zip(best, best[1:]), start=1):
        if b > a:
            problems.append(f"row {i}: best fitness increased {a!r} -> {b!r}")
    evals = record.evaluation_column()
    for i, (a, b) in enumerate(zip(evals, evals[1:]), start=1):
        if b < a:
            problems.append(f"row {i}: evaluations decreased {a} -> {b}")
    return problems


def write_summary(report: SummaryReport, path: str | Path) -> None:
    document = report.to_document(SCHEMA_VERSION)
    Path(path).write_text(json.dumps(document, indent=2, allow_nan=False) + "\n", encoding="utf-8")


def read_summary_document(path: str | Path) -> dict[str, Any]:
    document = json.loads(Path(path).read_text(encoding="utf-8"))
    version = document.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported schema_version {version!r}")
    return document


def read_summary(path: str | Path) -> SummaryReport:
    return SummaryReport.from_document(read_summary_document(path))


def deterministic_part(document: dict[str, Any]) -> dict[str, Any]:
    """The summary without its ``informational`` section."""
    return {k: v for k, v in document.items() if k != "informational"}
