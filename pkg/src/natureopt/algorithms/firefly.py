"""Firefly algorithm."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from natureopt.algorithms.base import Algorithm, SwarmState
from natureopt.algorithms.pso import decayed
from natureopt.core import CountedObjective, clamp_to_bounds
from natureopt.sampling import RngStream


def attractiveness(beta0: float, gamma: float, r2: float) -> float:
    return beta0 * np.exp(-gamma * r2)


def firefly_move(xi, xj, beta0: float, gamma: float, alpha_t: float, eps):
    """Move ``xi`` toward ``xj`` with distance-attenuated attraction plus ``alpha_t * eps``."""
    xi = np.asarray(xi, dtype=float)
    xj = np.asarray(xj, dtype=float)
    r2 = float(np.sum((xj - xi) ** 2))
    return xi + attractiveness(beta0, gamma, r2) * (xj - xi) + alpha_t * np.asarray(eps)


@dataclass(frozen=True)
class FireflyParams:
    beta0: float = 1.0
    gamma: float = 1.0
    alpha0: float = 0.5
    delta: float = 0.97

    def __post_init__(self) -> None:
        if self.beta0 < 0.0 or self.gamma < 0.0 or self.alpha0 < 0.0:
            raise ValueError("firefly beta0, gamma and alpha0 must be non-negative")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("firefly delta must lie in (0, 1)")


class Firefly(Algorithm):
    """Firefly algorithm with greedy acceptance.

    For every ordered pair ``(i, j)`` where ``j`` currently has lower fitness
    than ``i``, firefly ``i`` is moved toward ``j``, the move is evaluated and
    kept if it improves ``i``. The random term is uniform on ``[-0.5, 0.5]``
    times the domain width, scaled by ``alpha0 * delta**t``. The number of
    moves made in the last step is stored as ``aux["firefly"]["moves"]``.
    """

    name = "firefly"

    def __init__(self, params: FireflyParams | None = None) -> None:
        super().__init__(params or FireflyParams())

    def fresh_aux(self, state, problem):
        return {"moves": 0}

    def alpha_at(self, t: int) -> float:
        return decayed(self.params.alpha0, self.params.delta, t)

    def step(self, state: SwarmState, objective: CountedObjective, rng: RngStream) -> SwarmState:
        state, aux = self._begin(state, objective)
        p = self.params
        problem = objective.problem
        n, d = state.positions.shape
        alpha_t = self.alpha_at(aux["steps"])
        aux["alpha"] = alpha_t
        # One random vector per ordered pair, drawn up front so the stream
        # advances by a fixed amount regardless of how many moves fire.
        noise = (rng.random((n, n, d)) - 0.5) * problem.width
        moves = 0
        x, f = state.positions, state.fitness
        for i in range(n):
            for j in range(n):
                if i == j or not f[j] < f[i]:
                    continue
                candidate = firefly_move(x[i], x[j], p.beta0, p.gamma, alpha_t, noise[i, j])
                sol = objective(clamp_to_bounds(candidate, problem))
                moves += 1
                if sol.fitness < f[i]:
                    x[i] = sol.position
                    f[i] = sol.fitness
                state.consider(sol)
        aux["moves"] = moves
        return self._end(state, aux)
