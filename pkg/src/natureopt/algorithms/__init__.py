"""The six optimizers behind one step interface, plus a name registry."""

from __future__ import annotations

import dataclasses
from typing import Any, Mapping, Optional

from natureopt.algorithms.base import (
    Algorithm,
    Budget,
    SwarmState,
    Tracer,
    drive,
    initial_state,
    initialize,
    run,
)
from natureopt.algorithms.bat import Bat, BatParams, bat_frequency, bat_schedules, bat_velocity
from natureopt.algorithms.cuckoo import Cuckoo, CuckooParams, cuckoo_global_move, cuckoo_local_move
from natureopt.algorithms.firefly import Firefly, FireflyParams, firefly_move
from natureopt.algorithms.fpa import FPA, FPAParams, fpa_global_move, fpa_local_move
from natureopt.algorithms.pso import APSO, PSO, APSOParams, PSOParams, apso_move, decayed, pso_velocity

REGISTRY: dict[str, tuple[type[Algorithm], type]] = {
    "pso": (PSO, PSOParams),
    "apso": (APSO, APSOParams),
    "bat": (Bat, BatParams),
    "firefly": (Firefly, FireflyParams),
    "cuckoo": (Cuckoo, CuckooParams),
    "fpa": (FPA, FPAParams),
}


def algorithm_names() -> list[str]:
    return list(REGISTRY)


def param_names(name: str) -> list[str]:
    return [f.name for f in dataclasses.fields(REGISTRY[name][1])]


def make_algorithm(name: str, params: Optional[Mapping[str, Any]] = None) -> Algorithm:
    """Instantiate a registered algorithm, with keyword overrides of its defaults.

    Raises:
        KeyError: unknown algorithm name.
        TypeError: unknown parameter name.
        ValueError: parameter out of range.
    """
    try:
        cls, params_cls = REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown algorithm {name!r}; choose from {sorted(REGISTRY)}") from None
    return cls(params_cls(**dict(params or {})))


__all__ = [
    "APSO", "APSOParams", "Algorithm", "Bat", "BatParams", "Budget", "Cuckoo", "CuckooParams",
    "FPA", "FPAParams", "Firefly", "FireflyParams", "PSO", "PSOParams", "REGISTRY", "SwarmState",
    "Tracer", "algorithm_names", "apso_move", "bat_frequency", "bat_schedules", "bat_velocity",
    "cuckoo_global_move", "cuckoo_local_move", "decayed", "drive", "firefly_move", "fpa_global_move",
    "fpa_local_move", "initial_state", "initialize", "make_algorithm", "param_names", "pso_velocity", "run",
]
