"""Experiment orchestration: generation, reconstruction, model selection,
predictive checks, spike ingestion and sweeps."""

from .config import ExperimentConfig, config_from_dict, load_config
from .generation import Realization, generate, generate_realization, run_generation
from .ppc import PPCReport, posterior_predictive_check
from .reconstruct import Reconstruction, reconstruct
from .selection import Candidate, ModelSelectionReport, run_model_selection
from .spikes import binarize_spikes, ingest_spike_data, read_spike_file
from .sweep import SweepResult, bootstrap_ci, run_sweep

__all__ = [
    "Candidate",
    "ExperimentConfig",
    "ModelSelectionReport",
    "PPCReport",
    "Realization",
    "Reconstruction",
    "SweepResult",
    "binarize_spikes",
    "bootstrap_ci",
    "config_from_dict",
    "generate",
    "generate_realization",
    "ingest_spike_data",
    "load_config",
    "posterior_predictive_check",
    "read_spike_file",
    "reconstruct",
    "run_generation",
    "run_model_selection",
    "run_sweep",
]
