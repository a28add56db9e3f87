"""Synthetic (graph, time series) pairs drawn from a prior and a dynamics."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..dynamics import simulate, write_time_series
from ..graph import write_edge_list
from ..priors import sample_prior
from .io import write_json


@dataclass
class Realization:
    index: int
    graph: object
    x: np.ndarray
    partition: object = None
    seed: tuple = ()


def seed_streams(seed, n):
    """``n`` independent generators split off one master seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def generate_realization(prior, dynamics, n_nodes, T, rng):
    g, hyper = sample_prior(prior, rng, n_nodes)
    x = simulate(g, dynamics, T, rng)
    return g, x, hyper.get("partition")


def generate(prior, dynamics, n_nodes, T, realizations, seed):
    out = []
    for k, ss in enumerate(np.random.SeedSequence(seed).spawn(realizations)):
        g, x, part = generate_realization(prior, dynamics, n_nodes, T, np.random.default_rng(ss))
        out.append(Realization(k, g, x, part, tuple(ss.spawn_key)))
    return out


def run_generation(config, out_dir=None):
    """Write ``graph_KKK.txt`` / ``series_KKK.txt`` pairs plus a manifest
    recording the master seed and each realization's spawn key."""
    out_dir = Path(out_dir or config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    reals = generate(
        config.prior_model(), config.dynamics_model(), config.n_nodes, config.T, config.realizations, config.seed
    )
    graphs, series = [], []
    manifest = {"seed": config.seed, "n_nodes": config.n_nodes, "T": config.T, "realizations": []}
    for r in reals:
        gp = out_dir / f"graph_{r.index:03d}.txt"
        xp = out_dir / f"series_{r.index:03d}.txt"
        write_edge_list(r.graph, gp)
        write_time_series(r.x, xp)
        entry = {"index": r.index, "spawn_key": list(r.seed), "graph": gp.name, "series": xp.name}
        if r.partition is not None:
            entry["partition"] = r.partition.assignments.tolist()
        manifest["realizations"].append(entry)
        graphs.append(gp)
        series.append(xp)
    write_json(manifest, out_dir / "manifest.json")
    return graphs, series
