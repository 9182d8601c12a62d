"""Bat algorithm: frequency-tuned velocities with loudness and pulse-rate schedules."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from natureopt.algorithms.base import Algorithm, SwarmState
from natureopt.core import CountedObjective, clamp_to_bounds
from natureopt.sampling import RngStream

# Local walk step, as a fraction of the domain width.
LOCAL_WALK_SCALE = 0.01


def bat_frequency(f_min: float, f_max: float, beta):
    if f_min > f_max:
        raise ValueError("f_min must not exceed f_max")
    return f_min + (f_max - f_min) * beta


def bat_velocity(v, x, best, frequency, toward_best: bool = False):
    """Velocity update. By default displaced by ``(x - best) * f``; ``toward_best`` flips the sign."""
    displacement = best - x if toward_best else x - best
    return v + displacement * frequency


def bat_schedules(loudness: float, r0: float, alpha: float, gamma: float, t: float) -> tuple[float, float]:
    """Return ``(alpha * A, r0 * (1 - exp(-gamma * t)))``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("loudness factor alpha must lie in (0, 1)")
    if not gamma > 0.0:
        raise ValueError("pulse-rate gamma must be positive")
    return alpha * loudness, r0 * (1.0 - math.exp(-gamma * t))


@dataclass(frozen=True)
class BatParams:
    # Symmetric range: with f >= 0 every proposal moves away from the best.
    f_min: float = -1.0
    f_max: float = 1.0
    alpha: float = 0.9
    gamma: float = 0.9
    loudness0: float = 1.0
    pulse_rate0: float = 0.5
    toward_best: bool = False

    def __post_init__(self) -> None:
        if self.f_min > self.f_max:
            raise ValueError("f_min must not exceed f_max")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("BA alpha must lie in (0, 1)")
        if not self.gamma > 0.0:
            raise ValueError("BA gamma must be positive")
        if not self.loudness0 > 0.0:
            raise ValueError("initial loudness must be positive")
        if not 0.0 <= self.pulse_rate0 <= 1.0:
            raise ValueError("initial pulse rate must lie in [0, 1]")


class Bat(Algorithm):
    """Bat algorithm.

    Each bat draws a frequency, updates its velocity and proposes ``x + v``.
    With probability equal to its pulse rate the proposal is replaced by a
    Gaussian walk around the best solution. A proposal is accepted when it
    improves the bat's fitness and a uniform draw falls below its loudness;
    acceptance lowers loudness and raises the pulse rate. Pulse rates start
    at zero and approach ``pulse_rate0`` as ``1 - exp(-gamma * t)``.
    """

    name = "bat"

    def __init__(self, params: BatParams | None = None) -> None:
        super().__init__(params or BatParams())

    def fresh_aux(self, state, problem):
        n = state.size
        return {
            "velocity": np.zeros_like(state.positions),
            "loudness": np.full(n, self.params.loudness0),
            "pulse_rate": np.zeros(n),
        }

    def step(self, state: SwarmState, objective: CountedObjective, rng: RngStream) -> SwarmState:
        state, aux = self._begin(state, objective)
        p = self.params
        problem = objective.problem
        n, d = state.positions.shape
        beta = rng.random(n)
        walk_gate = rng.random(n)
        eps = rng.normal((n, d))
        accept_draw = rng.random(n)
        t = aux["steps"] + 1
        vel, loud, pulse = aux["velocity"], aux["loudness"], aux["pulse_rate"]
        walk_scale = LOCAL_WALK_SCALE * problem.width
        for i in range(n):
            freq = bat_frequency(p.f_min, p.f_max, beta[i])
            vel[i] = bat_velocity(vel[i], state.positions[i], state.best.position, freq, p.toward_best)
            if walk_gate[i] < pulse[i]:
                candidate = state.best.position + walk_scale * eps[i]
            else:
                candidate = state.positions[i] + vel[i]
            sol = objective(clamp_to_bounds(candidate, problem))
            if sol.fitness < state.fitness[i] and accept_draw[i] < loud[i]:
                state.positions[i] = sol.position
                state.fitness[i] = sol.fitness
                loud[i], pulse[i] = bat_schedules(loud[i], p.pulse_rate0, p.alpha, p.gamma, t)
            state.consider(sol)
        return self._end(state, aux)
