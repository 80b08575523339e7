"""Experiment harness composing the simulation modules into runnable studies."""

from .config import ConfigError, RunConfig, SweepSpec
from .experiments import asymmetry, run_sweep, run_tomography, run_trajectory

__all__ = ["ConfigError", "RunConfig", "SweepSpec", "asymmetry", "run_sweep", "run_tomography",
           "run_trajectory"]
