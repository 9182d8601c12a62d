"""Experiment harness: configuration, seeded repeats, trace and summary files."""

from natureopt.harness.config import ConfigError, ExperimentConfig, config_from_dict, load_config
from natureopt.harness.experiment import run_experiment
from natureopt.harness.io import read_summary, read_trace, write_summary, write_trace

__all__ = [
    "ConfigError", "ExperimentConfig", "config_from_dict", "load_config", "read_summary",
    "read_trace", "run_experiment", "write_summary", "write_trace",
]
