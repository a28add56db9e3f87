"""Turn spike times into binary segments and reconstruct from them.

Each spike switches its unit on for an exponentially distributed duration;
the binarized record is then cut into equal segments."""

import numpy as np

from reconlab import DynamicsModel, PriorModel
from reconlab.pipeline import ingest_spike_data, reconstruct
from reconlab.priors import EdgeCountPrior
from reconlab.sampler import SamplerConfig

rng = np.random.default_rng(5)
duration = 60.0
# six Poisson units; unit 1 fires shortly after unit 0
units = [np.sort(rng.uniform(0, duration, rng.poisson(120))) for _ in range(6)]
units[1] = np.sort(np.clip(np.r_[units[1], units[0] + 0.01], 0, duration))

segments = ingest_spike_data(units, duration, n_steps=20_000, extension_mean=0.03, n_segments=10, rng=rng)
print(f"{len(segments)} segments of shape {segments[0].shape}; active fraction {np.mean(segments[0]):.3f}")

x = segments[0]
prior = PriorModel("er_simple", EdgeCountPrior("geometric", 3.0))
dyn = DynamicsModel("glauber", {"J": 0.5}, alpha0=0.01, beta0=0.01, free=("J",), bounds={"J": (0.0, 3.0)})
rec = reconstruct(x, prior, dyn, SamplerConfig(burn_in=200, thinning=5, samples=100, seed=0))
pi = rec.edge_probability
print("edge count fixed by the search:", rec.samples[0].n_edges)
print("most probable pairs:")
iu = np.triu_indices(6, 1)
for k in np.argsort(-pi[iu])[:3]:
    print(f"  ({iu[0][k]}, {iu[1][k]}): {pi[iu][k]:.2f}")
