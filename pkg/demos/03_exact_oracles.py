"""On three or four nodes everything can be enumerated, so the sampler and
the estimators can be held against exact answers."""

from collections import Counter

import numpy as np

from reconlab import DynamicsModel, Graph, PriorModel, sample_prior, simulate
from reconlab.infotheory import (
    delta_prior_reconstructability,
    enumerate_evidence,
    enumerate_posterior,
    estimate_log_evidence,
    exact_mutual_information_model,
    posterior_entropy,
)
from reconlab.priors import EdgeCountPrior
from reconlab.sampler import SamplerConfig, run_chain

rng = np.random.default_rng(0)
prior = PriorModel("er_simple", EdgeCountPrior("delta", 3))
dyn = DynamicsModel("glauber", {"J": 0.3})
g, _ = sample_prior(prior, rng, 4)
x = simulate(g, dyn, 30, rng)

exact = enumerate_posterior(x, prior, dyn)
samples = run_chain(x, prior, dyn, SamplerConfig(burn_in=200, thinning=1, samples=20_000, sweep_size=4, seed=1))
freq = Counter(tuple(sorted(map(tuple, s.edges.tolist()))) for s in samples)
print("graph                     exact   sampled")
for h, lp in sorted(exact, key=lambda t: -t[1])[:5]:
    key = tuple(sorted((i, j) for i, j, _ in h.edges()))
    print(f"{str(key):<25} {2**lp:.4f}  {freq[key] / len(samples):.4f}")

# The mean-field evidence adds H_MF(G|x) >= H(G|x) to the mean log joint, so
# it lands above the exact value by roughly the entropy gap.
est = estimate_log_evidence(samples[::10])
print(f"\nlog-evidence: exact {enumerate_evidence(x, prior, dyn):.3f}, mean-field {est.value:.3f}")
print(f"posterior entropy: exact {posterior_entropy(exact):.3f}, mean-field {est.graph_entropy:.3f}")

# exact mutual information by enumerating every series of length 5 on 3 nodes
small = PriorModel("er_simple", EdgeCountPrior("delta", 1))
for J in (0.0, 0.5, 1.0, 2.0):
    mi = exact_mutual_information_model(small, DynamicsModel("glauber", {"J": J}), 3, 5)
    print(f"J={J}: I(G;X) = {mi:.4f} bits of H(G) = {np.log2(3):.4f}")

# a prior that almost certainly returns one graph leaves little to learn
eps = 10.0 ** -np.arange(1, 7)
psi = delta_prior_reconstructability(Graph.from_edges(3, [(0, 1)]), DynamicsModel("glauber", {"J": 1.0}), eps, 4)
for e, v in zip(eps, psi):
    print(f"eps={e:.0e}: Psi={v:.4f}, Psi*log2(1/eps)={v * np.log2(1 / e):.3f}")
