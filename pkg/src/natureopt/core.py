"""Problem definition, counted evaluation and population initialization."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from natureopt.sampling import RngStream

Objective = Callable[[np.ndarray], float]
Constraint = Callable[[np.ndarray], float]


class EvaluationError(ArithmeticError):
    """Raised when the objective returns a non-finite value."""

    def __init__(self, position: np.ndarray, value: float) -> None:
        self.position = np.array(position, dtype=float)
        self.value = value
        super().__init__(f"non-finite objective value {value!r} at {self.position.tolist()}")


@dataclass(frozen=True)
class Problem:
    """A box-bounded minimization problem.

    Attributes:
        objective: Maps a position vector to a real value (lower is better).
        lower_bounds: Per-coordinate lower limits.
        upper_bounds: Per-coordinate upper limits.
        constraints: Inequality functions, feasible where ``g(x) <= 0``.
        known_optimum: Optional ``(position, value)`` pair, used by tests and reports.
        name: Label used in reports.
    """

    objective: Objective
    lower_bounds: np.ndarray
    upper_bounds: np.ndarray
    constraints: tuple[Constraint, ...] = ()
    known_optimum: Optional[tuple[np.ndarray, float]] = None
    name: str = "problem"

    def __post_init__(self) -> None:
        lo = np.atleast_1d(np.asarray(self.lower_bounds, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper_bounds, dtype=float))
        if lo.ndim != 1 or lo.shape != hi.shape or lo.size == 0:
            raise ValueError("bounds must be non-empty vectors of equal length")
        # Zero-width coordinates are allowed (they pin a coordinate).
        if np.any(lo > hi) or not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("bounds must be finite with lower <= upper")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower_bounds", lo)
        object.__setattr__(self, "upper_bounds", hi)
        object.__setattr__(self, "constraints", tuple(self.constraints))

    @property
    def dimension(self) -> int:
        return int(self.lower_bounds.size)

    @property
    def width(self) -> np.ndarray:
        return self.upper_bounds - self.lower_bounds

    @classmethod
    def box(cls, objective: Objective, lower: float, upper: float, dimension: int, **kwargs) -> "Problem":
        """Build a problem with the same interval on every coordinate."""
        return cls(objective, np.full(dimension, lower, dtype=float), np.full(dimension, upper, dtype=float), **kwargs)


@dataclass(frozen=True)
class PenaltyConfig:
    """Static penalty ``C * sum(max(0, g_j(x)) ** exponent)``."""

    coefficient: float = 1.0e6
    exponent: float = 2.0

    def __post_init__(self) -> None:
        if not self.coefficient > 0:
            raise ValueError("penalty coefficient must be positive")
        if not self.exponent > 0:
            raise ValueError("penalty exponent must be positive")


@dataclass
class EvaluationCounter:
    """Monotone count of objective evaluations within one run."""

    count: int = 0

    def increment(self) -> int:
        """Bump the count and return the index of the evaluation just made."""
        index = self.count
        self.count += 1
        return index


@dataclass(frozen=True)
class EvaluatedSolution:
    position: np.ndarray
    fitness: float
    evaluation_index: int

    def improves_on(self, other: Optional["EvaluatedSolution"]) -> bool:
        # Strict comparison: on ties the incumbent (earlier evaluation) is kept.
        return other is None or self.fitness < other.fitness


def penalty_term(problem: Problem, position: np.ndarray, penalty: PenaltyConfig) -> float:
    total = 0.0
    for g in problem.constraints:
        violation = max(0.0, float(g(position)))
        if violation > 0.0:
            total += violation**penalty.exponent
    return penalty.coefficient * total if total > 0.0 else 0.0


def evaluate(
    problem: Problem,
    position: np.ndarray,
    penalty: PenaltyConfig,
    counter: EvaluationCounter,
) -> float:
    """Penalized objective value at ``position``; increments ``counter`` by one.

    Raises:
        EvaluationError: if the objective or penalty is not finite.
    """
    counter.increment()
    value = float(problem.objective(position))
    if problem.constraints:
        value += penalty_term(problem, position, penalty)
    if not math.isfinite(value):
        raise EvaluationError(position, value)
    return value


@dataclass
class CountedObjective:
    """Problem, penalty and counter bundled for use by the optimizers.

    Calling it evaluates a position and returns an :class:`EvaluatedSolution`
    stamped with the evaluation index.
    """

    problem: Problem
    penalty: PenaltyConfig = field(default_factory=PenaltyConfig)
    counter: EvaluationCounter = field(default_factory=EvaluationCounter)

    def __call__(self, position: np.ndarray) -> EvaluatedSolution:
        index = self.counter.count
        fitness = evaluate(self.problem, position, self.penalty, self.counter)
        return EvaluatedSolution(np.array(position, dtype=float), fitness, index)

    @property
    def evaluations(self) -> int:
        return self.counter.count


def clamp_to_bounds(position: np.ndarray, problem: Problem) -> np.ndarray:
    """Project each coordinate onto ``[lower_i, upper_i]``."""
    position = np.asarray(position, dtype=float)
    if position.shape[-1] != problem.dimension:
        raise ValueError(f"expected {problem.dimension} coordinates, got {position.shape[-1]}")
    return np.clip(position, problem.lower_bounds, problem.upper_bounds)


def init_population(problem: Problem, n: int, rng: RngStream) -> np.ndarray:
    """Draw ``n`` positions uniformly over the box, shape ``(n, dimension)``."""
    if n < 1:
        raise ValueError("population size must be at least 1")
    u = rng.random((n, problem.dimension))
    pop = problem.lower_bounds + u * problem.width
    # Guard against round-off pushing a coordinate past the upper bound.
    return np.clip(pop, problem.lower_bounds, problem.upper_bounds)


def best_of(solutions: Sequence[EvaluatedSolution]) -> EvaluatedSolution:
    best = None
    for s in solutions:
        if s.improves_on(best):
            best = s
    if best is None:
        raise ValueError("no solutions")
    return best
