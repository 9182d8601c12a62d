"""Cuckoo search with Lévy-flight global moves and a gated local walk."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from natureopt.algorithms.base import Algorithm, SwarmState
from natureopt.core import CountedObjective, clamp_to_bounds
from natureopt.sampling import LevyParams, RngStream


def heaviside(u):
    return np.where(np.asarray(u) > 0.0, 1.0, 0.0)


def cuckoo_local_move(x, xj, xk, s, pa, eps, scale: float = 1.0):
    """``x + scale * s * H(pa - eps) * (xj - xk)``, elementwise."""
    return np.asarray(x, dtype=float) + scale * s * heaviside(pa - np.asarray(eps)) * (np.asarray(xj) - np.asarray(xk))


def cuckoo_global_move(x, alpha, levy):
    return np.asarray(x, dtype=float) + alpha * np.asarray(levy)


@dataclass(frozen=True)
class CuckooParams:
    """``step_scale`` defaults to 1% of each coordinate's domain width."""

    pa: float = 0.25
    step_scale: Optional[float] = None
    lam: float = 1.5
    local_scale: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.pa <= 1.0:
            raise ValueError("pa must lie in [0, 1]")
        if self.step_scale is not None and self.step_scale < 0.0:
            raise ValueError("step_scale must be non-negative")
        LevyParams(self.lam)


class Cuckoo(Algorithm):
    """Cuckoo search: a Lévy phase then a local phase, ``2n`` evaluations per step.

    Global phase: each nest proposes ``x + alpha * L`` and the proposal
    replaces a uniformly chosen nest if it is fitter. Local phase: each nest
    proposes ``x + s * H(pa - eps) * (x_j - x_k)`` with ``j, k`` consecutive
    entries of a fresh permutation, kept if fitter.
    """

    name = "cuckoo"
    min_population = 3

    def __init__(self, params: CuckooParams | None = None) -> None:
        super().__init__(params or CuckooParams())

    def fresh_aux(self, state, problem):
        return {}

    def step(self, state: SwarmState, objective: CountedObjective, rng: RngStream) -> SwarmState:
        state, aux = self._begin(state, objective)
        p = self.params
        problem = objective.problem
        n, d = state.positions.shape
        alpha = 0.01 * problem.width if p.step_scale is None else p.step_scale
        x, f = state.positions, state.fitness

        levy = rng.levy(LevyParams(p.lam), (n, d))
        targets = rng.integers(n, n)
        for i in range(n):
            sol = objective(clamp_to_bounds(cuckoo_global_move(x[i], alpha, levy[i]), problem))
            j = targets[i]
            if sol.fitness < f[j]:
                x[j] = sol.position
                f[j] = sol.fitness
            state.consider(sol)

        perm = rng.permutation(n)
        s = rng.random(n)
        eps = rng.random((n, d))
        for i in range(n):
            j, k = perm[i], perm[(i + 1) % n]
            candidate = cuckoo_local_move(x[i], x[j], x[k], s[i], p.pa, eps[i], p.local_scale)
            sol = objective(clamp_to_bounds(candidate, problem))
            if sol.fitness < f[i]:
                x[i] = sol.position
                f[i] = sol.fitness
            state.consider(sol)
        return self._end(state, aux)
