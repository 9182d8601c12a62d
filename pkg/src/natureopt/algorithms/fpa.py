"""Flower pollination algorithm."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from natureopt.algorithms.base import Algorithm, SwarmState
from natureopt.core import CountedObjective, clamp_to_bounds
from natureopt.sampling import LevyParams, RngStream


def fpa_global_move(x, global_best, gamma, levy):
    x = np.asarray(x, dtype=float)
    return x + gamma * np.asarray(levy) * (np.asarray(global_best) - x)


def fpa_local_move(x, xj, xk, u):
    return np.asarray(x, dtype=float) + u * (np.asarray(xj) - np.asarray(xk))


@dataclass(frozen=True)
class FPAParams:
    switch_probability: float = 0.8
    gamma: float = 0.1
    lam: float = 1.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.switch_probability <= 1.0:
            raise ValueError("switch_probability must lie in [0, 1]")
        if self.gamma < 0.0:
            raise ValueError("gamma must be non-negative")
        LevyParams(self.lam)


class FPA(Algorithm):
    """Flower pollination: Lévy-scaled pull toward the best with probability
    ``switch_probability``, otherwise a uniform-weighted difference of two
    random flowers. Moves are kept only when they improve the flower."""

    name = "fpa"
    min_population = 3

    def __init__(self, params: FPAParams | None = None) -> None:
        super().__init__(params or FPAParams())

    def fresh_aux(self, state, problem):
        return {}

    def step(self, state: SwarmState, objective: CountedObjective, rng: RngStream) -> SwarmState:
        state, aux = self._begin(state, objective)
        p = self.params
        n, d = state.positions.shape
        x, f = state.positions, state.fitness
        switch = rng.random(n)
        levy = rng.levy(LevyParams(p.lam), (n, d))
        u = rng.random(n)
        perm = rng.permutation(n)
        for i in range(n):
            if switch[i] < p.switch_probability:
                candidate = fpa_global_move(x[i], state.best.position, p.gamma, levy[i])
            else:
                candidate = fpa_local_move(x[i], x[perm[i]], x[perm[(i + 1) % n]], u[i])
            sol = objective(clamp_to_bounds(candidate, objective.problem))
            if sol.fitness < f[i]:
                x[i] = sol.position
                f[i] = sol.fitness
            state.consider(sol)
        return self._end(state, aux)
