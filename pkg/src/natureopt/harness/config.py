"""Experiment configuration: JSON schema, CLI overrides and validation.

Config file schema (JSON object; every key optional except those marked)::

    {
      "problem": "sphere",              # required; see --list-problems
      "dimension": 2,
      "algorithm": "apso",              # exactly one of algorithm / hybrid
      "params": {"beta": 0.3},          # overrides of the algorithm defaults
      "hybrid": {                       # see hybrid_from_dict
        "structure": "parallel_split",
        "stages": [{"algorithm": "cuckoo"}, {"algorithm": "fpa", "params": {}}],
        "partition": [10, 10],
        "merge_period": 10
      },
      "population": 20,
      "max_evaluations": 10000,         # at least one of the two budgets
      "max_iterations": null,
      "repeats": 1,
      "seed": 0,                        # unsigned 64-bit
      "output_dir": "results",
      "trace_every": 1,
      "success_threshold": 0.001,
      "workers": 1
    }
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from natureopt.algorithms import make_algorithm
from natureopt.benchmarks import BENCHMARKS
from natureopt.hybrid import HybridSpec, Stage, _min_population
from natureopt.sampling import SEED_MASK


class ConfigError(ValueError):
    """Invalid experiment configuration; ``violations`` lists every problem found."""

    def __init__(self, violations: list[str]) -> None:
        self.violations = list(violations)
        super().__init__("invalid configuration:\n  - " + "\n  - ".join(self.violations))


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str
    dimension: int = 2
    algorithm: Optional[str] = None
    params: dict[str, Any] = field(default_factory=dict)
    hybrid: Optional[HybridSpec] = None
    population: int = 20
    max_evaluations: Optional[int] = None
    max_iterations: Optional[int] = None
    repeats: int = 1
    seed: int = 0
    output_dir: str = "results"
    trace_every: int = 1
    success_threshold: float = 1e-3
    workers: int = 1

    def to_dict(self) -> dict[str, Any]:
        out = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        out["params"] = dict(self.params)
        out["hybrid"] = hybrid_to_dict(self.hybrid) if self.hybrid is not None else None
        return out

    @property
    def label(self) -> str:
        return self.algorithm if self.hybrid is None else f"hybrid:{self.hybrid.structure}"


FIELDS = {f.name for f in dataclasses.fields(ExperimentConfig)}


def hybrid_to_dict(spec: HybridSpec) -> dict[str, Any]:
    stages = []
    for stage in spec.stages:
        entry: dict[str, Any] = {}
        if isinstance(stage.component, HybridSpec):
            entry["hybrid"] = hybrid_to_dict(stage.component)
        else:
            entry["algorithm"] = stage.component
            entry["params"] = dict(stage.params)
        if spec.structure == "sequential":
            entry["share"] = stage.share
        stages.append(entry)
    out: dict[str, Any] = {"structure": spec.structure, "stages": stages}
    if spec.structure == "parallel_switch":
        out["switch_probabilities"] = list(spec.switch_probabilities)
    if spec.structure == "parallel_split":
        out["partition"] = list(spec.partition)
        out["merge_period"] = spec.merge_period
    return out


def hybrid_from_dict(data: dict[str, Any]) -> HybridSpec:
    """Build a :class:`HybridSpec` from its JSON form.

    Raises:
        ValueError: malformed or invalid spec.
    """
    if not isinstance(data, dict):
        raise ValueError("hybrid must be an object")
    stages = []
    for i, entry in enumerate(data.get("stages") or []):
        if not isinstance(entry, dict):
            raise ValueError(f"hybrid stage {i} must be an object")
        if ("algorithm" in entry) == ("hybrid" in entry):
            raise ValueError(f"hybrid stage {i} needs exactly one of 'algorithm' or 'hybrid'")
        component = entry["algorithm"] if "algorithm" in entry else hybrid_from_dict(entry["hybrid"])
        stages.append(Stage(component, dict(entry.get("params") or {}), float(entry.get("share", 1.0))))
    return HybridSpec(
        structure=data.get("structure", ""),
        stages=tuple(stages),
        switch_probabilities=tuple(data.get("switch_probabilities") or ()),
        partition=tuple(data.get("partition") or ()),
        merge_period=int(data.get("merge_period", 10)),
    )


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def config_from_dict(data: dict[str, Any]) -> ExperimentConfig:
    """Validate ``data`` and build a config, reporting every violation at once."""
    errors: list[str] = []
    if not isinstance(data, dict):
        raise ConfigError(["config must be a JSON object"])
    for key in sorted(set(data) - FIELDS):
        errors.append(f"unknown key {key!r}")
    values = {k: v for k, v in data.items() if k in FIELDS}

    problem = values.get("problem")
    if problem is None:
        errors.append("problem is required")
    elif problem not in BENCHMARKS:
        errors.append(f"unknown problem {problem!r}; choose from {sorted(BENCHMARKS)}")

    dimension = values.get("dimension")
    if dimension is None and problem in BENCHMARKS:
        dimension = BENCHMARKS[problem].fixed_dimension or 2
        values["dimension"] = dimension
    if dimension is not None:
        if not _is_int(dimension) or dimension < 1:
            errors.append("dimension must be a positive integer")
        elif problem in BENCHMARKS:
            try:
                BENCHMARKS[problem].check_dimension(dimension)
            except ValueError as exc:
                errors.append(str(exc))

    for key, minimum in (("population", 1), ("repeats", 1), ("trace_every", 1), ("workers", 1)):
        if key in values and (not _is_int(values[key]) or values[key] < minimum):
            errors.append(f"{key} must be an integer >= {minimum}")
    for key in ("max_evaluations", "max_iterations"):
        v = values.get(key)
        if v is not None and (not _is_int(v) or v < 1):
            errors.append(f"{key} must be a positive integer")
    if values.get("max_evaluations") is None and values.get("max_iterations") is None:
        errors.append("set max_evaluations and/or max_iterations")
    seed = values.get("seed", 0)
    if not _is_int(seed) or not 0 <= seed <= SEED_MASK:
        errors.append("seed must be an unsigned 64-bit integer")
    threshold = values.get("success_threshold", 1e-3)
    if isinstance(threshold, bool) or not isinstance(threshold, (int, float)) or not threshold > 0:
        errors.append("success_threshold must be a positive number")
    else:
        values["success_threshold"] = float(threshold)
    if not isinstance(values.get("output_dir", ""), str):
        errors.append("output_dir must be a string")

    algorithm = values.get("algorithm")
    hybrid = values.get("hybrid")
    params = values.get("params") or {}
    values["params"] = params
    if (algorithm is None) == (hybrid is None):
        errors.append("set exactly one of algorithm or hybrid")
    if not isinstance(params, dict):
        errors.append("params must be an object")
    elif algorithm is not None:
        try:
            algo = make_algorithm(algorithm, params)
            pop = values.get("population", 20)
            if _is_int(pop) and pop < algo.min_population:
                errors.append(f"{algorithm} needs population >= {algo.min_population}")
        except KeyError as exc:
            errors.append(str(exc.args[0]))
        except (TypeError, ValueError) as exc:
            errors.append(f"params for {algorithm}: {exc}")
    if hybrid is not None:
        if params:
            errors.append("params apply to single algorithms; put hybrid parameters on the stages")
        try:
            spec = hybrid if isinstance(hybrid, HybridSpec) else hybrid_from_dict(hybrid)
            values["hybrid"] = spec
            pop = values.get("population", 20)
            if spec.population_size is not None and "population" not in data:
                values["population"] = spec.population_size
            elif spec.population_size is not None and pop != spec.population_size:
                errors.append(f"population {pop} does not match partition total {spec.population_size}")
            elif _is_int(pop) and pop < _min_population(Stage(spec)):
                errors.append(f"hybrid needs population >= {_min_population(Stage(spec))}")
        except ValueError as exc:
            errors.extend(str(exc).split("; "))

    if errors:
        raise ConfigError(errors)
    return ExperimentConfig(**values)


def load_config(path: str | Path, overrides: Optional[dict[str, Any]] = None) -> ExperimentConfig:
    """Read a JSON config file and apply ``overrides`` (``None`` values ignored).

    Raises:
        OSError: unreadable file.
        ConfigError: invalid JSON or content.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{path}: invalid JSON ({exc})"]) from None
    if isinstance(data, dict):
        data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return config_from_dict(data)
