"""Experiment configuration: one JSON document, schema-checked."""

import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from ..dynamics import DynamicsModel
from ..priors import PriorModel
from ..sampler import SamplerConfig

SCHEMA = {
    "type": "object",
    "properties": {
        "prior": {"type": "object", "required": ["kind"]},
        "dynamics": {"type": "object", "required": ["kind"]},
        "inference": {
            "type": "object",
            "properties": {"prior": {"type": "object"}, "dynamics": {"type": "object"}},
        },
        "n_nodes": {"type": "integer", "minimum": 1},
        "T": {"type": "integer", "minimum": 1},
        "realizations": {"type": "integer", "minimum": 0},
        "sweep": {
            "type": "object",
            "properties": {
                "param": {"type": "string"},
                "grid": {"type": "array", "items": {"type": "number"}},
                "target": {"enum": ["both", "data", "inference"]},
            },
            "required": ["param", "grid"],
        },
        "sampler": {"type": "object"},
        "estimator": {
            "type": "object",
            "properties": {"pseudo_count": {"type": "number", "minimum": 0}},
        },
        "chains": {"type": "integer", "minimum": 1},
        "heuristics": {"type": "array", "items": {"enum": ["corr", "granger", "te"]}},
        "candidates": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["prior", "dynamics"],
                "properties": {"name": {"type": "string"}},
            },
        },
        "ppc": {"type": "object"},
        "seed": {"type": "integer", "minimum": 0},
        "out": {"type": "string"},
        "inputs": {"type": "object"},
    },
}


@dataclass
class ExperimentConfig:
    prior: dict = None
    dynamics: dict = None
    inference: dict = field(default_factory=dict)
    n_nodes: int = 10
    T: int = 100
    realizations: int = 1
    sweep: dict = None
    sampler: dict = field(default_factory=dict)
    estimator: dict = field(default_factory=dict)
    chains: int = 1
    heuristics: list = field(default_factory=lambda: ["corr", "granger", "te"])
    candidates: list = field(default_factory=list)
    ppc: dict = field(default_factory=dict)
    seed: int = 0
    out: str = "."
    inputs: dict = field(default_factory=dict)

    def prior_model(self):
        return PriorModel.from_dict(self.prior)

    def dynamics_model(self):
        return DynamicsModel.from_dict(self.dynamics)

    def inference_models(self):
        """Inference prior and dynamics; default to the data-generating ones."""
        prior = PriorModel.from_dict(self.inference.get("prior", self.prior))
        dyn = DynamicsModel.from_dict(self.inference.get("dynamics", self.dynamics))
        return prior, dyn

    def sampler_config(self):
        spec = dict(self.sampler)
        spec.setdefault("seed", self.seed)
        return SamplerConfig.from_dict(spec)

    @property
    def pseudo_count(self):
        return float(self.estimator.get("pseudo_count", 0.0))


def validate(spec):
    jsonschema.validate(spec, SCHEMA)


def config_from_dict(spec, base_dir=None):
    validate(spec)
    cfg = ExperimentConfig(**spec)
    if base_dir is not None:
        for key, path in cfg.inputs.items():
            full = Path(base_dir) / path
            if not full.exists():
                raise FileNotFoundError(f"config input {key!r} not found: {full}")
            cfg.inputs[key] = str(full)
    return cfg


def load_config(path):
    path = Path(path)
    return config_from_dict(json.loads(path.read_text()), base_dir=path.parent)
