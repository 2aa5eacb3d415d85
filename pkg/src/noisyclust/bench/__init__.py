"""Experiment runner, CSV output and SVG plots."""
from .config import ConfigError, ExperimentConfig, load_config
from .plots import emit_plots
from .runner import FIELDS, ResultRow, q_hat, read_rows, run_experiment, summarize, trial_seed

__all__ = ["ConfigError", "ExperimentConfig", "FIELDS", "ResultRow", "emit_plots", "load_config",
           "q_hat", "read_rows", "run_experiment", "summarize", "trial_seed"]
