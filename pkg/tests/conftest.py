from __future__ import annotations

import numpy as np
import pytest

from natureopt.core import CountedObjective, EvaluatedSolution, Problem
from natureopt.algorithms import SwarmState

ACCEPTANCE_LINES: list[str] = []


class ScriptedRng:
    """Stand-in for RngStream returning fixed values, for hand-checked steps."""

    def __init__(self, random=0.5, normal=1.0, levy=1.0, integers=0, permutation=None):
        self._random = random
        self._normal = normal
        self._levy = levy
        self._integers = integers
        self._permutation = permutation
        self.seed = 0
        self.key = ()

    @staticmethod
    def _fill(value, size):
        return value if size is None else np.full(size, value, dtype=float)

    def random(self, size=None):
        return self._fill(self._random, size)

    def normal(self, size=None):
        return self._fill(self._normal, size)

    def levy(self, params, size=None):
        return self._fill(self._levy, size)

    def integers(self, high, size=None):
        return self._integers if size is None else np.full(size, self._integers, dtype=int)

    def permutation(self, n):
        return np.arange(n) if self._permutation is None else np.asarray(self._permutation)


class RecordingObjective:
    """Wraps an objective and logs every call independently of the package's counter."""

    def __init__(self, fn):
        self.fn = fn
        self.calls: list[np.ndarray] = []

    def __call__(self, x):
        self.calls.append(np.array(x, dtype=float))
        return self.fn(x)


def line_problem(fn, lo=-10.0, hi=10.0, dim=1) -> Problem:
    return Problem.box(fn, lo, hi, dim)


def make_state(positions, objective_fn, best_position=None, best_fitness=None) -> SwarmState:
    positions = np.asarray(positions, dtype=float)
    fitness = np.array([objective_fn(x) for x in positions])
    if best_position is None:
        i = int(np.argmin(fitness))
        best_position, best_fitness = positions[i], fitness[i]
    best = EvaluatedSolution(np.asarray(best_position, dtype=float), float(best_fitness), 0)
    return SwarmState(positions, fitness, best)


@pytest.fixture
def scripted():
    return ScriptedRng


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
