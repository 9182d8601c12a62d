"""Run records (convergence traces plus the final solution) and summary statistics."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class TraceRow:
    iteration: int
    evaluations: int
    best_fitness: float
    stage: str = ""


@dataclass
class RunRecord:
    """Convergence trace of one run.

    ``wall_time`` is informational only and never compared in tests.
    """

    run_id: int
    seed: Optional[int]
    trace: list[TraceRow] = field(default_factory=list)
    best_position: Optional[np.ndarray] = None
    best_fitness: float = float("inf")
    evaluations: int = 0
    iterations: int = 0
    wall_time: float = 0.0

    def best_column(self) -> list[float]:
        return [row.best_fitness for row in self.trace]

    def evaluation_column(self) -> list[int]:
        return [row.evaluations for row in self.trace]

    def check(self) -> None:
        """Raise ``AssertionError`` if the trace violates its monotonicity invariants."""
        best = self.best_column()
        evals = self.evaluation_column()
        its = [row.iteration for row in self.trace]
        for a, b in zip(best, best[1:]):
            assert b <= a, f"best fitness increased: {a} -> {b}"
        for a, b in zip(evals, evals[1:]):
            assert b >= a, f"evaluation count decreased: {a} -> {b}"
        for a, b in zip(its, its[1:]):
            assert b > a, f"iteration not increasing: {a} -> {b}"


@dataclass
class SummaryReport:
    """Final-fitness statistics over the repeats of one configuration."""

    best: float
    worst: float
    mean: float
    median: float
    std: float
    success_rate: float
    success_threshold: float
    target_value: float
    repeats: int
    total_evaluations: int
    config: dict[str, Any] = field(default_factory=dict)
    runs: list[dict[str, Any]] = field(default_factory=list)
    informational: dict[str, Any] = field(default_factory=dict)

    STAT_FIELDS = ("best", "worst", "mean", "median", "std", "success_rate", "success_threshold",
                   "target_value", "repeats", "total_evaluations")

    def to_document(self, schema_version: int) -> dict[str, Any]:
        return {
            "schema_version": schema_version,
            "config": self.config,
            "summary": {name: getattr(self, name) for name in self.STAT_FIELDS},
            "runs": self.runs,
            "informational": self.informational,
        }

    @classmethod
    def from_document(cls, document: dict[str, Any]) -> "SummaryReport":
        stats = document["summary"]
        return cls(
            **{name: stats[name] for name in cls.STAT_FIELDS},
            config=document.get("config", {}),
            runs=document.get("runs", []),
            informational=document.get("informational", {}),
        )


def summarize(finals: Sequence[float], threshold: float, target_value: float = 0.0,
              total_evaluations: int = 0) -> SummaryReport:
    """Statistics of final fitness values; success means ``final - target_value < threshold``."""
    if not finals:
        raise ValueError("no runs to summarize")
    finals = [float(f) for f in finals]
    hits = sum(1 for f in finals if f - target_value < threshold)
    return SummaryReport(
        best=min(finals),
        worst=max(finals),
        mean=statistics.fmean(finals),
        median=float(statistics.median(finals)),
        std=statistics.pstdev(finals) if len(finals) > 1 else 0.0,
        success_rate=hits / len(finals),
        success_threshold=float(threshold),
        target_value=float(target_value),
        repeats=len(finals),
        total_evaluations=int(total_evaluations),
    )
