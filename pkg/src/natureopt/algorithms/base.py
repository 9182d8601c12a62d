"""Shared optimizer state, the step interface and the iteration driver."""

from __future__ import annotations

import copy
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from natureopt.core import (
    CountedObjective,
    EvaluatedSolution,
    PenaltyConfig,
    Problem,
    init_population,
)
from natureopt.records import RunRecord, TraceRow
from natureopt.sampling import RngStream

# Consecutive evaluation-free steps after which a run is considered stalled.
STALL_LIMIT = 100


@dataclass
class SwarmState:
    """Everything an optimizer carries from one iteration to the next.

    ``aux`` holds algorithm-specific state keyed by algorithm name, e.g.
    ``aux["pso"]["velocity"]``. Each entry also records ``steps``, the number
    of steps that algorithm has taken, which drives its parameter schedules.
    """

    positions: np.ndarray
    fitness: np.ndarray
    best: EvaluatedSolution
    iteration: int = 0
    aux: dict[str, dict[str, Any]] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return int(self.positions.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.positions.shape[1])

    def copy(self) -> "SwarmState":
        return SwarmState(
            positions=self.positions.copy(),
            fitness=self.fitness.copy(),
            best=self.best,
            iteration=self.iteration,
            aux=copy.deepcopy(self.aux),
        )

    def consider(self, solution: EvaluatedSolution) -> None:
        if solution.improves_on(self.best):
            self.best = solution


class Algorithm(ABC):
    """A population-based optimizer expressed as a step function.

    Subclasses set ``name`` and ``min_population`` and implement
    :meth:`prepare` (attach per-agent auxiliary state to a population) and
    :meth:`step` (one iteration).
    """

    name: str = ""
    min_population: int = 1

    def __init__(self, params: Any) -> None:
        self.params = params

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.params!r})"

    @abstractmethod
    def fresh_aux(self, state: SwarmState, problem: Problem) -> dict[str, Any]:
        """Per-agent auxiliary state for a population entering this algorithm."""

    def prepare(self, state: SwarmState, problem: Problem) -> SwarmState:
        """Attach this algorithm's auxiliary state, keeping its schedule counter if present."""
        state = state.copy()
        steps = state.aux.get(self.name, {}).get("steps", 0)
        aux = self.fresh_aux(state, problem)
        aux["steps"] = steps
        state.aux[self.name] = aux
        return state

    @abstractmethod
    def step(self, state: SwarmState, objective: CountedObjective, rng: RngStream) -> SwarmState:
        """Advance one iteration; returns a new state."""

    def check_state(self, state: SwarmState, problem: Problem) -> None:
        if state.dimension != problem.dimension:
            raise ValueError(f"state has dimension {state.dimension}, problem has {problem.dimension}")
        if state.size < self.min_population:
            raise ValueError(f"{self.name} needs at least {self.min_population} agents, got {state.size}")
        if self.name not in state.aux:
            raise ValueError(f"state was not prepared for {self.name}")

    def _begin(self, state: SwarmState, objective: CountedObjective) -> tuple[SwarmState, dict[str, Any]]:
        self.check_state(state, objective.problem)
        state = state.copy()
        return state, state.aux[self.name]

    def _end(self, state: SwarmState, aux: dict[str, Any]) -> SwarmState:
        aux["steps"] += 1
        state.iteration += 1
        return state


def evaluate_population(positions: np.ndarray, objective: CountedObjective) -> tuple[np.ndarray, EvaluatedSolution]:
    best = None
    fitness = np.empty(positions.shape[0])
    for i, x in enumerate(positions):
        sol = objective(x)
        fitness[i] = sol.fitness
        if sol.improves_on(best):
            best = sol
    return fitness, best


def initial_state(problem: Problem, n: int, objective: CountedObjective, rng: RngStream) -> SwarmState:
    """Uniform population, evaluated once (``n`` evaluations), without auxiliary state."""
    positions = init_population(problem, n, rng)
    fitness, best = evaluate_population(positions, objective)
    return SwarmState(positions, fitness, best)


def initialize(
    algorithm: Algorithm,
    objective: CountedObjective,
    n: int,
    rng: RngStream,
) -> SwarmState:
    if n < algorithm.min_population:
        raise ValueError(f"{algorithm.name} needs at least {algorithm.min_population} agents, got {n}")
    state = initial_state(objective.problem, n, objective, rng)
    return algorithm.prepare(state, objective.problem)


@dataclass(frozen=True)
class Budget:
    """Stopping rule: evaluation and/or iteration limits."""

    max_evaluations: Optional[int] = None
    max_iterations: Optional[int] = None

    def __post_init__(self) -> None:
        if self.max_evaluations is None and self.max_iterations is None:
            raise ValueError("budget needs max_evaluations or max_iterations")
        for value in (self.max_evaluations, self.max_iterations):
            if value is not None and value <= 0:
                raise ValueError("budget limits must be positive")

    def exhausted(self, evaluations: int, iterations: int) -> bool:
        if self.max_evaluations is not None and evaluations >= self.max_evaluations:
            return True
        return self.max_iterations is not None and iterations >= self.max_iterations


class Tracer:
    """Accumulates trace rows, keeping every ``every``-th iteration plus the last."""

    def __init__(self, every: int = 1) -> None:
        if every < 1:
            raise ValueError("trace granularity must be >= 1")
        self.every = every
        self.rows: list[TraceRow] = []
        self._pending: Optional[TraceRow] = None

    def record(self, iteration: int, evaluations: int, best: float, stage: str = "") -> None:
        row = TraceRow(iteration, evaluations, best, stage)
        if iteration == 0 or iteration % self.every == 0:
            self.rows.append(row)
            self._pending = None
        else:
            self._pending = row

    def finish(self) -> list[TraceRow]:
        if self._pending is not None:
            self.rows.append(self._pending)
            self._pending = None
        return self.rows


def drive(
    stepper,
    state: SwarmState,
    objective: CountedObjective,
    rng: RngStream,
    budget: Budget,
    tracer: Tracer,
    stage: str = "",
    iteration_offset: int = 0,
) -> SwarmState:
    """Apply ``stepper.step`` until ``budget`` is exhausted.

    Evaluation limits are checked before each step, so a run can overshoot by
    at most one step's evaluations. ``budget`` counts are absolute: evaluations
    on ``objective.counter`` and iterations on ``state.iteration``.
    """
    idle = 0
    while not budget.exhausted(objective.evaluations, state.iteration - iteration_offset):
        before = objective.evaluations
        state = stepper.step(state, objective, rng)
        tracer.record(state.iteration, objective.evaluations, state.best.fitness, stage)
        idle = idle + 1 if objective.evaluations == before else 0
        if idle >= STALL_LIMIT:
            break
    return state


def run(
    algorithm: Algorithm,
    problem: Problem,
    n: int,
    budget: Budget,
    rng: RngStream,
    penalty: Optional[PenaltyConfig] = None,
    run_id: int = 0,
    trace_every: int = 1,
) -> RunRecord:
    """Initialize a population of ``n`` and iterate ``algorithm`` until the budget is spent."""
    if budget.max_evaluations is not None and budget.max_evaluations < n:
        raise ValueError(f"evaluation budget {budget.max_evaluations} is below the initialization cost {n}")
    started = time.perf_counter()
    objective = CountedObjective(problem, penalty or PenaltyConfig())
    state = initialize(algorithm, objective, n, rng)
    tracer = Tracer(trace_every)
    tracer.record(0, objective.evaluations, state.best.fitness)
    state = drive(algorithm, state, objective, rng, budget, tracer)
    return finish_record(run_id, rng, tracer, state, objective, started)


def finish_record(run_id, rng, tracer, state, objective, started) -> RunRecord:
    return RunRecord(
        run_id=run_id,
        seed=rng.seed if not rng.key else None,
        trace=tracer.finish(),
        best_position=state.best.position.copy(),
        best_fitness=state.best.fitness,
        evaluations=objective.evaluations,
        iterations=state.iteration,
        wall_time=time.perf_counter() - started,
    )
