from .config import EXPERIMENTS, ExperimentConfig
from .experiments import run_experiment
from .report import ExperimentReport, emit_report, load_report
from .stats import ks_distance

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "ExperimentReport",
    "emit_report",
    "ks_distance",
    "load_report",
    "run_experiment",
]
