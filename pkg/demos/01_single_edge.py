"""One possible edge seen T times through a noisy channel.

The posterior, its entropy and the reconstructability all have closed forms,
which makes this the cleanest place to see how noise and sample size trade
off.
"""

import numpy as np

from reconlab.single_edge import SingleEdgeModel, edge_posterior, edge_reconstructability

p, r, T = 0.5, 0.2, 20

# Posterior of the edge as a function of the number n of positive readings.
# q > r makes positives evidence for the edge, q < r reverses the sign, and
# q = r leaves the prior untouched.
n = np.arange(T + 1)
for q in (2 * r, r, r / 2):
    post = edge_posterior(SingleEdgeModel(p, q, r, T), n)
    print(f"q={q:.2f}: P(edge | n) at n=0,5,10,20 ->", np.round(post[[0, 5, 10, 20]], 4))

# Reconstructability Psi = 1 - H(G|X)/H(G) grows with T away from q = r and
# stays at zero on that line.
print("\nPsi over T for a few true-positive rates")
for q in (0.1, 0.2, 0.3, 0.5, 0.9):
    row = [edge_reconstructability(SingleEdgeModel(p, q, r, t)) for t in (1, 10, 100, 1000)]
    print(f"q={q:.1f}:", "  ".join(f"{v + 0.0:.3f}" for v in np.round(row, 3)))
