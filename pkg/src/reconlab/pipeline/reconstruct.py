"""Posterior reconstruction of one dataset: chains, marginals and the
information report."""

from dataclasses import dataclass, field

import numpy as np

from ..infotheory import EdgeMarginals, info_report, on_support
from ..sampler import SamplerConfig, run_chains


@dataclass
class Reconstruction:
    chains: list
    marginals: EdgeMarginals
    report: object
    chain_reports: list = field(default_factory=list)

    @property
    def samples(self):
        return [s for chain in self.chains for s in chain]

    @property
    def edge_probability(self):
        return self.marginals.edge_probability

    def summary(self):
        out = self.report.to_dict()
        out["chains"] = [r.to_dict() for r in self.chain_reports]
        return out


def reconstruct(x, prior, dynamics, config=None, n_chains=1, threads=1, pseudo_count=0.0):
    """Run ``n_chains`` chains and summarize the pooled samples; each chain
    also gets its own report so evidence and psi come with a spread."""
    config = config or SamplerConfig()
    x = np.ascontiguousarray(x, dtype=np.uint8)
    chains = run_chains(x, prior, dynamics, config, n_chains=n_chains, threads=threads)
    pooled = [s for chain in chains for s in chain]
    # marginals from samples on the support, unless no chain reached it
    marginals = EdgeMarginals.from_samples(on_support(pooled) or pooled, pseudo_count)
    report = info_report(pooled, pseudo_count)
    chain_reports = [info_report(c, pseudo_count) for c in chains] if n_chains > 1 else [report]
    return Reconstruction(chains, marginals, report, chain_reports)
