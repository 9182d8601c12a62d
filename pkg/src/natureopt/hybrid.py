"""Hybrid combinators: sequential chaining, random switching and split/merge.

A :class:`HybridSpec` describes the wiring. Parallel structures become
steppers with the same ``prepare``/``step`` interface as a plain
algorithm, so they can be nested inside each other or used as a stage of a
sequential hybrid.

Random streams: algorithm steps use the run's stream; the switch selector
and subpopulations after the first use child streams spawned from it, keyed
by position in the spec tree. A switch that always picks one algorithm, or a
split with a single subpopulation, therefore replays the plain run exactly.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Union

import numpy as np

from natureopt.algorithms import Algorithm, Budget, SwarmState, Tracer, drive, initial_state, make_algorithm
from natureopt.algorithms.base import finish_record
from natureopt.core import CountedObjective, PenaltyConfig, Problem
from natureopt.records import RunRecord
from natureopt.sampling import RngStream

SEQUENTIAL = "sequential"
PARALLEL_SWITCH = "parallel_switch"
PARALLEL_SPLIT = "parallel_split"
STRUCTURES = (SEQUENTIAL, PARALLEL_SWITCH, PARALLEL_SPLIT)

MAX_DEPTH = 3
MIN_SUBPOPULATION = 3

_SWITCH_KEY = 0x5357
_SPLIT_KEY = 0x5350


def combination_count(n: int, k: int) -> int:
    """Binomial coefficient ``n! / (k! (n-k)!)`` by the exact multiplicative formula."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")
    k = min(k, n - k)
    result = 1
    for i in range(1, k + 1):
        # Exact at every step: the running product is C(n-k+i, i).
        result = result * (n - k + i) // i
    return result


@dataclass(frozen=True)
class Stage:
    """One component of a hybrid: a registered algorithm or a nested spec."""

    component: Union[str, "HybridSpec"]
    params: Mapping[str, Any] = field(default_factory=dict)
    share: float = 1.0

    @property
    def label(self) -> str:
        return self.component if isinstance(self.component, str) else self.component.structure


@dataclass(frozen=True)
class HybridSpec:
    structure: str
    stages: tuple[Stage, ...]
    switch_probabilities: tuple[float, ...] = ()
    partition: tuple[int, ...] = ()
    merge_period: int = 10

    def __post_init__(self) -> None:
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "switch_probabilities", tuple(float(p) for p in self.switch_probabilities))
        object.__setattr__(self, "partition", tuple(int(s) for s in self.partition))
        problems = self.violations()
        if problems:
            raise ValueError("; ".join(problems))

    def violations(self, depth: int = 1) -> list[str]:
        """Every validation problem found in this spec and its nested specs."""
        out: list[str] = []
        if depth > MAX_DEPTH:
            return [f"hybrid nesting deeper than {MAX_DEPTH}"]
        if self.structure not in STRUCTURES:
            return [f"unknown structure {self.structure!r}"]
        if not self.stages:
            out.append(f"{self.structure}: no stages")
        if self.structure == SEQUENTIAL:
            if len(self.stages) < 2:
                out.append("sequential: needs at least 2 stages")
            shares = [s.share for s in self.stages]
            if any(not s > 0 for s in shares):
                out.append("sequential: shares must be positive")
            if abs(math.fsum(shares) - 1.0) > 1e-9:
                out.append(f"sequential: shares sum to {math.fsum(shares)}, not 1")
        if self.structure == PARALLEL_SWITCH:
            probs = self.switch_probabilities
            if len(probs) != len(self.stages):
                out.append("parallel_switch: need one probability per stage")
            if any(p < 0 for p in probs):
                out.append("parallel_switch: probabilities must be non-negative")
            if probs and abs(math.fsum(probs) - 1.0) > 1e-12:
                out.append(f"parallel_switch: probabilities sum to {math.fsum(probs)}, not 1")
        if self.structure == PARALLEL_SPLIT:
            if len(self.partition) != len(self.stages):
                out.append("parallel_split: need one subpopulation size per stage")
            for size, stage in zip(self.partition, self.stages):
                need = max(MIN_SUBPOPULATION, _min_population(stage))
                if size < need:
                    out.append(f"parallel_split: subpopulation for {stage.label} has {size} agents, needs >= {need}")
            if self.merge_period < 1:
                out.append("parallel_split: merge_period must be >= 1")
        for stage in self.stages:
            if isinstance(stage.component, HybridSpec):
                if self.structure != SEQUENTIAL and stage.component.structure == SEQUENTIAL:
                    out.append(f"{self.structure}: a sequential hybrid cannot be nested in a parallel one")
                out.extend(stage.component.violations(depth + 1))
            else:
                try:
                    make_algorithm(stage.component, stage.params)
                except (KeyError, TypeError, ValueError) as exc:
                    out.append(f"stage {stage.component!r}: {exc}")
        return out

    @property
    def population_size(self) -> Optional[int]:
        return sum(self.partition) if self.structure == PARALLEL_SPLIT else None


def _min_population(stage: Stage) -> int:
    if isinstance(stage.component, HybridSpec):
        spec = stage.component
        if spec.structure == PARALLEL_SPLIT:
            return sum(spec.partition)
        return max((_min_population(s) for s in spec.stages), default=1)
    try:
        return make_algorithm(stage.component, stage.params).min_population
    except (KeyError, TypeError, ValueError):
        return 1


class SwitchStepper:
    """Each step, draw one uniform variate and run the selected component on the whole population.

    Every component's auxiliary state stays attached between its activations.
    ``selections[k]`` counts how often component ``k`` ran.
    """

    def __init__(self, components: list, probabilities: tuple[float, ...], selector: RngStream) -> None:
        if not components:
            raise ValueError("parallel_switch needs at least one algorithm")
        self.components = components
        cum = np.cumsum(probabilities)
        cum[-1] = 1.0
        self.cumulative = cum
        self.selector = selector
        self.selections = [0] * len(components)
        self.min_population = max(c.min_population for c in components)

    def select(self, u: float) -> int:
        return int(np.searchsorted(self.cumulative, u, side="right"))

    def prepare(self, state: SwarmState, problem: Problem) -> SwarmState:
        for comp in self.components:
            state = comp.prepare(state, problem)
        return state

    def step(self, state: SwarmState, objective: CountedObjective, rng: RngStream) -> SwarmState:
        k = self.select(self.selector.random())
        self.selections[k] += 1
        return self.components[k].step(state, objective, rng)


class SplitStepper:
    """Independent subpopulations, pooled and re-dealt every ``merge_period`` steps.

    At a merge all agents are ranked by fitness and dealt round-robin to the
    subpopulations (skipping full ones), so each receives top performers.
    Every subpopulation starts from, and after each merge is reset to, the
    shared global best as its own best. Per-agent auxiliary state is
    re-initialized at merges; schedule counters are kept.
    """

    def __init__(self, components: list, partition: tuple[int, ...], merge_period: int,
                 streams: list[Optional[RngStream]], key: str) -> None:
        self.components = components
        self.partition = partition
        self.merge_period = merge_period
        self.streams = streams
        self.key = key
        self.min_population = sum(partition)

    def _subpops(self, state: SwarmState) -> list[SwarmState]:
        return state.aux[self.key]["subpops"]

    def prepare(self, state: SwarmState, problem: Problem) -> SwarmState:
        if state.size != sum(self.partition):
            raise ValueError(f"population of {state.size} does not match partition {self.partition}")
        state = state.copy()
        old = state.aux.get(self.key, {}).get("subpops")
        subpops = []
        start = 0
        for k, (comp, size) in enumerate(zip(self.components, self.partition)):
            sub = SwarmState(state.positions[start:start + size].copy(), state.fitness[start:start + size].copy(), state.best)
            if old is not None:
                sub.aux = {name: {"steps": a.get("steps", 0)} for name, a in old[k].aux.items()}
                sub.iteration = old[k].iteration
            subpops.append(comp.prepare(sub, problem))
            start += size
        state.aux[self.key] = {"subpops": subpops}
        return state

    def step(self, state: SwarmState, objective: CountedObjective, rng: RngStream) -> SwarmState:
        state = state.copy()
        subpops = self._subpops(state)
        for k, comp in enumerate(self.components):
            subpops[k] = comp.step(subpops[k], objective, self.streams[k] or rng)
            state.consider(subpops[k].best)
        state.positions = np.concatenate([s.positions for s in subpops])
        state.fitness = np.concatenate([s.fitness for s in subpops])
        state.iteration += 1
        if len(subpops) > 1 and state.iteration % self.merge_period == 0:
            state = self.merge(state, objective.problem)
        return state

    def merge(self, state: SwarmState, problem: Problem) -> SwarmState:
        order = np.argsort(state.fitness, kind="stable")
        slots: list[list[int]] = [[] for _ in self.partition]
        k = 0
        for agent in order:
            while len(slots[k]) >= self.partition[k]:
                k = (k + 1) % len(slots)
            slots[k].append(int(agent))
            k = (k + 1) % len(slots)
        idx = np.concatenate([np.array(s, dtype=int) for s in slots])
        pooled = state.copy()
        pooled.positions = state.positions[idx]
        pooled.fitness = state.fitness[idx]
        return self.prepare(pooled, problem)


def build_stepper(stage: Stage, rng: RngStream, path: tuple[int, ...] = ()):
    """Turn a stage into something with ``prepare``/``step``/``min_population``."""
    if isinstance(stage.component, str):
        return make_algorithm(stage.component, stage.params)
    spec = stage.component
    children = [build_stepper(s, rng, path + (i,)) for i, s in enumerate(spec.stages)]
    if spec.structure == PARALLEL_SWITCH:
        return SwitchStepper(children, spec.switch_probabilities, rng.spawn(_SWITCH_KEY, *path))
    if spec.structure == PARALLEL_SPLIT:
        streams = [None] + [rng.spawn(_SPLIT_KEY, *path, k) for k in range(1, len(children))]
        return SplitStepper(children, spec.partition, spec.merge_period, streams, key="split" + "".join(f".{p}" for p in path))
    raise ValueError("a sequential hybrid cannot be used as a per-iteration stepper")


def _as_budget(budget: Union[Budget, int]) -> Budget:
    return budget if isinstance(budget, Budget) else Budget(max_evaluations=int(budget))


def _population(spec: HybridSpec, n: Optional[int]) -> int:
    split_n = spec.population_size
    if split_n is not None:
        if n is not None and n != split_n:
            raise ValueError(f"population size {n} does not match partition total {split_n}")
        return split_n
    if n is None:
        raise ValueError("population size n is required")
    return n


def _start(problem, n, budget, rng, penalty):
    if budget.max_evaluations is not None and budget.max_evaluations < n:
        raise ValueError(f"evaluation budget {budget.max_evaluations} is below the initialization cost {n}")
    objective = CountedObjective(problem, penalty or PenaltyConfig())
    state = initial_state(problem, n, objective, rng)
    tracer = Tracer()
    return objective, state, tracer


def run_parallel(
    spec: HybridSpec,
    problem: Problem,
    budget: Union[Budget, int],
    rng: RngStream,
    n: Optional[int] = None,
    penalty: Optional[PenaltyConfig] = None,
    run_id: int = 0,
    trace_every: int = 1,
) -> RunRecord:
    if spec.structure == SEQUENTIAL:
        raise ValueError("use run_sequential for sequential hybrids")
    budget = _as_budget(budget)
    n = _population(spec, n)
    started = time.perf_counter()
    stepper = build_stepper(Stage(spec), rng)
    if n < stepper.min_population:
        raise ValueError(f"population of {n} is below the minimum {stepper.min_population}")
    objective, state, _ = _start(problem, n, budget, rng, penalty)
    tracer = Tracer(trace_every)
    state = stepper.prepare(state, problem)
    tracer.record(0, objective.evaluations, state.best.fitness)
    state = drive(stepper, state, objective, rng, budget, tracer)
    return finish_record(run_id, rng, tracer, state, objective, started)


def run_parallel_switch(spec, problem, budget, rng, n=None, **kwargs) -> RunRecord:
    """Random per-iteration switching between algorithms over one shared population."""
    if spec.structure != PARALLEL_SWITCH:
        raise ValueError(f"expected a parallel_switch spec, got {spec.structure}")
    return run_parallel(spec, problem, budget, rng, n, **kwargs)


def run_parallel_split(spec, problem, budget, rng, n=None, **kwargs) -> RunRecord:
    """Subpopulations evolved under separate algorithms with periodic pooled re-dealing."""
    if spec.structure != PARALLEL_SPLIT:
        raise ValueError(f"expected a parallel_split spec, got {spec.structure}")
    return run_parallel(spec, problem, budget, rng, n, **kwargs)


def _targets(total: Optional[int], shares: list[float], start: int) -> list[Optional[int]]:
    if total is None:
        return [None] * len(shares)
    span = total - start
    out = []
    acc = 0.0
    for share in shares:
        acc += share
        out.append(start + int(round(span * acc)))
    out[-1] = total
    return out


def _run_stages(spec, state, objective, rng, problem, budget, tracer, path, prefix):
    shares = [s.share for s in spec.stages]
    evals = _targets(budget.max_evaluations, shares, objective.evaluations)
    iters = _targets(budget.max_iterations, shares, state.iteration)
    prev_e, prev_i = objective.evaluations, state.iteration
    for k, stage in enumerate(spec.stages):
        label = f"{prefix}{k}:{stage.label}"
        if (evals[k] is not None and evals[k] <= prev_e) or (iters[k] is not None and iters[k] <= prev_i):
            raise ValueError(f"stage {label} receives no budget")
        stage_budget = Budget(evals[k], iters[k])
        prev_e = evals[k] if evals[k] is not None else prev_e
        prev_i = iters[k] if iters[k] is not None else prev_i
        # Auxiliary state does not survive a stage boundary.
        state = state.copy()
        state.aux = {}
        if isinstance(stage.component, HybridSpec) and stage.component.structure == SEQUENTIAL:
            state = _run_stages(stage.component, state, objective, rng, problem, stage_budget, tracer,
                                path + (k,), label + "/")
            continue
        stepper = build_stepper(stage, rng, path + (k,))
        if state.size < stepper.min_population:
            raise ValueError(f"stage {label} needs {stepper.min_population} agents, population has {state.size}")
        state = stepper.prepare(state, problem)
        state = drive(stepper, state, objective, rng, stage_budget, tracer, stage=label)
    return state


def run_sequential(
    spec: HybridSpec,
    problem: Problem,
    budget: Union[Budget, int],
    rng: RngStream,
    n: Optional[int] = None,
    penalty: Optional[PenaltyConfig] = None,
    run_id: int = 0,
    trace_every: int = 1,
) -> RunRecord:
    """Run the stages one after another on a shared population.

    Stage ``k`` runs until the cumulative budget share of stages ``0..k`` is
    spent; the initial population's evaluations count toward the first
    stage. Trace rows carry the stage label ``"<index>:<name>"``.
    """
    if spec.structure != SEQUENTIAL:
        raise ValueError(f"expected a sequential spec, got {spec.structure}")
    budget = _as_budget(budget)
    if n is None:
        raise ValueError("population size n is required")
    started = time.perf_counter()
    objective, state, _ = _start(problem, n, budget, rng, penalty)
    tracer = Tracer(trace_every)
    tracer.record(0, objective.evaluations, state.best.fitness, "init")
    state = _run_stages(spec, state, objective, rng, problem, budget, tracer, (), "")
    return finish_record(run_id, rng, tracer, state, objective, started)


def run_hybrid(spec: HybridSpec, problem: Problem, budget, rng: RngStream, n: Optional[int] = None, **kwargs) -> RunRecord:
    if spec.structure == SEQUENTIAL:
        return run_sequential(spec, problem, budget, rng, n, **kwargs)
    return run_parallel(spec, problem, budget, rng, n, **kwargs)
