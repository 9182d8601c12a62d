"""Benchmark objectives packaged as problems with known optima.

All objectives are minimized. The sinc maximization problem is stored
negated, so its optimum value is -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from natureopt.core import Problem


def sinc_objective(x: float) -> float:
    """Negated ``sin(x)/x``, with the removable singularity filled by ``-1``."""
    x = float(x)
    if x == 0.0:
        return -1.0
    return -math.sin(x) / x


def abs_exp_sin_objective(x: float) -> float:
    """``|x| * exp(-sin(x^2))``: minimum 0 at the origin, where it is not differentiable."""
    x = float(x)
    return abs(x) * math.exp(-math.sin(x * x))


def multimodal_objective(x) -> float:
    """``(sum sin^2 x_i - exp(-sum x_i^2)) * exp(-sum sin^2 sqrt|x_i|)``; minimum -1 at the origin."""
    x = np.asarray(x, dtype=float)
    s = np.sum(np.sin(x) ** 2) - np.exp(-np.sum(x * x))
    return float(s * np.exp(-np.sum(np.sin(np.sqrt(np.abs(x))) ** 2)))


def sphere(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.dot(x, x))


def rosenbrock(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def rastrigin(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def ackley(x) -> float:
    x = np.asarray(x, dtype=float)
    n = x.size
    a = -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x * x) / n))
    b = -np.exp(np.sum(np.cos(2.0 * np.pi * x)) / n)
    return float(a + b + 20.0 + np.e)


@dataclass(frozen=True)
class BenchmarkDescriptor:
    """A named benchmark.

    Attributes:
        name: Registry key.
        objective: Vector objective (1-D functions take a length-1 vector).
        lower, upper: Interval applied to every coordinate.
        optimum_position: Maps a dimension to the known minimizer.
        optimum_value: Known minimum.
        fixed_dimension: Set for functions defined in one dimension only.
        min_dimension: Smallest admissible dimension.
        notes: Free-form remarks (smoothness, origin).
    """

    name: str
    objective: Callable[[np.ndarray], float]
    lower: float
    upper: float
    optimum_position: Callable[[int], np.ndarray]
    optimum_value: float
    fixed_dimension: Optional[int] = None
    min_dimension: int = 1
    notes: str = ""

    def check_dimension(self, dimension: int) -> None:
        if self.fixed_dimension is not None and dimension != self.fixed_dimension:
            raise ValueError(f"{self.name} is defined only for dimension {self.fixed_dimension}")
        if dimension < self.min_dimension:
            raise ValueError(f"{self.name} needs dimension >= {self.min_dimension}")

    def problem(self, dimension: Optional[int] = None) -> Problem:
        dimension = dimension or self.fixed_dimension or 2
        self.check_dimension(dimension)
        opt = self.optimum_position(dimension)
        return Problem.box(
            self.objective, self.lower, self.upper, dimension,
            known_optimum=(opt, self.optimum_value), name=self.name,
        )


def _zeros(n: int) -> np.ndarray:
    return np.zeros(n)


def _ones(n: int) -> np.ndarray:
    return np.ones(n)


def _scalar(fn: Callable[[float], float]) -> Callable[[np.ndarray], float]:
    def objective(x) -> float:
        return fn(np.asarray(x, dtype=float).reshape(-1)[0])

    objective.__name__ = fn.__name__
    return objective


ANALYTIC_SUITE = (
    BenchmarkDescriptor(
        "sinc", _scalar(sinc_objective), -10.0, 10.0, _zeros, -1.0, fixed_dimension=1,
        notes="negated sin(x)/x; maximum 1 at x=0 becomes minimum -1",
    ),
    BenchmarkDescriptor(
        "absexpsin", _scalar(abs_exp_sin_objective), -10.0, 10.0, _zeros, 0.0, fixed_dimension=1,
        notes="non-differentiable at the minimizer x=0",
    ),
    BenchmarkDescriptor(
        "yang-multimodal", multimodal_objective, -10.0, 10.0, _zeros, -1.0,
        notes="non-differentiable at the minimizer; highly multimodal",
    ),
)

STANDARD_SUITE = (
    BenchmarkDescriptor("sphere", sphere, -5.12, 5.12, _zeros, 0.0, notes="smooth, convex"),
    BenchmarkDescriptor("rosenbrock", rosenbrock, -5.0, 10.0, _ones, 0.0, min_dimension=2,
                        notes="smooth, curved valley"),
    BenchmarkDescriptor("rastrigin", rastrigin, -5.12, 5.12, _zeros, 0.0, notes="smooth, multimodal"),
    BenchmarkDescriptor("ackley", ackley, -32.768, 32.768, _zeros, 0.0,
                        notes="multimodal; non-differentiable at the minimizer"),
)

BENCHMARKS: dict[str, BenchmarkDescriptor] = {d.name: d for d in ANALYTIC_SUITE + STANDARD_SUITE}


def standard_suite() -> list[BenchmarkDescriptor]:
    return list(STANDARD_SUITE)


def analytic_suite() -> list[BenchmarkDescriptor]:
    return list(ANALYTIC_SUITE)


def get_benchmark(name: str) -> BenchmarkDescriptor:
    try:
        return BENCHMARKS[name]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; choose from {sorted(BENCHMARKS)}") from None


def make_problem(name: str, dimension: Optional[int] = None) -> Problem:
    return get_benchmark(name).problem(dimension)
