"""Particle swarm optimization and its accelerated, velocity-free variant."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from natureopt.algorithms.base import Algorithm, SwarmState
from natureopt.core import CountedObjective, clamp_to_bounds
from natureopt.sampling import RngStream


def pso_velocity(v, x, global_best, personal_best, alpha, beta, eps1, eps2):
    """``v + alpha*eps1*(g - x) + beta*eps2*(p - x)``, with unit inertia."""
    return v + alpha * eps1 * (global_best - x) + beta * eps2 * (personal_best - x)


def apso_move(x, global_best, beta, alpha_t, eps):
    """Convex pull toward the global best plus a scaled Gaussian kick."""
    return (1.0 - beta) * x + beta * global_best + alpha_t * eps


def decayed(alpha0: float, factor: float, t: int) -> float:
    """Geometric schedule ``alpha0 * factor**t``."""
    return alpha0 * factor**t


@dataclass(frozen=True)
class PSOParams:
    alpha: float = 0.3
    beta: float = 0.3

    def __post_init__(self) -> None:
        for name in ("alpha", "beta"):
            if not 0.0 <= getattr(self, name) <= 2.0:
                raise ValueError(f"PSO {name} must lie in [0, 2]")


class PSO(Algorithm):
    """Standard PSO with unit inertia and per-coordinate random weights.

    Positions are clamped to the box after each move; velocities are not.
    """

    name = "pso"

    def __init__(self, params: PSOParams | None = None) -> None:
        super().__init__(params or PSOParams())

    def fresh_aux(self, state, problem):
        return {
            "velocity": np.zeros_like(state.positions),
            "pbest_x": state.positions.copy(),
            "pbest_f": state.fitness.copy(),
        }

    def step(self, state: SwarmState, objective: CountedObjective, rng: RngStream) -> SwarmState:
        state, aux = self._begin(state, objective)
        n, d = state.positions.shape
        eps1 = rng.random((n, d))
        eps2 = rng.random((n, d))
        vel, px, pf = aux["velocity"], aux["pbest_x"], aux["pbest_f"]
        for i in range(n):
            vel[i] = pso_velocity(
                vel[i], state.positions[i], state.best.position, px[i],
                self.params.alpha, self.params.beta, eps1[i], eps2[i],
            )
            state.positions[i] = clamp_to_bounds(state.positions[i] + vel[i], objective.problem)
            sol = objective(state.positions[i])
            state.fitness[i] = sol.fitness
            if sol.fitness < pf[i]:
                pf[i] = sol.fitness
                px[i] = sol.position
            state.consider(sol)
        return self._end(state, aux)


@dataclass(frozen=True)
class APSOParams:
    alpha0: float = 1.0
    beta: float = 0.3
    gamma: float = 0.97

    def __post_init__(self) -> None:
        if self.alpha0 < 0.0:
            raise ValueError("APSO alpha0 must be non-negative")
        if not 0.1 <= self.beta <= 0.7:
            raise ValueError("APSO beta must lie in [0.1, 0.7]")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("APSO gamma must lie in (0, 1)")


class APSO(Algorithm):
    """Accelerated PSO: no velocities, randomness decaying as ``alpha0 * gamma**t``."""

    name = "apso"

    def __init__(self, params: APSOParams | None = None) -> None:
        super().__init__(params or APSOParams())

    def fresh_aux(self, state, problem):
        return {}

    def alpha_at(self, t: int) -> float:
        return decayed(self.params.alpha0, self.params.gamma, t)

    def step(self, state: SwarmState, objective: CountedObjective, rng: RngStream) -> SwarmState:
        state, aux = self._begin(state, objective)
        n, d = state.positions.shape
        eps = rng.normal((n, d))
        alpha_t = self.alpha_at(aux["steps"])
        aux["alpha"] = alpha_t
        for i in range(n):
            x = apso_move(state.positions[i], state.best.position, self.params.beta, alpha_t, eps[i])
            state.positions[i] = clamp_to_bounds(x, objective.problem)
            sol = objective(state.positions[i])
            state.fitness[i] = sol.fitness
            state.consider(sol)
        return self._end(state, aux)
