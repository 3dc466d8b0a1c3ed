"""Experiment configuration, seeded sweeps and report emission."""
from .config import ConfigError, ExperimentConfig, parse_config, read_config_file
from .emit import emit, read_csv, read_jsonl
from .runner import SweepResult, TrialReport, child_seed, run_sweep, wilson_interval

__all__ = [
    "ConfigError", "ExperimentConfig", "SweepResult", "TrialReport", "child_seed", "emit",
    "parse_config", "read_config_file", "read_csv", "read_jsonl", "run_sweep", "wilson_interval",
]
