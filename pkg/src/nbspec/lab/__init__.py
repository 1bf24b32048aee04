"""Config-driven experiment runner."""

from .config import ExperimentConfig, load_config, make_config
from .experiments import run_trials, summarize
from .records import TrialRecord, emit, records_from_json, records_to_json

__all__ = [
    "ExperimentConfig", "TrialRecord", "emit", "load_config", "make_config",
    "records_from_json", "records_to_json", "run_trials", "summarize",
]
