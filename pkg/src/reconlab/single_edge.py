"""Closed-form two-node model: one possible edge observed T times through a
noisy channel with true-positive rate q and false-positive rate r."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit
from scipy.stats import binom

from ._math import LN2, binary_entropy


@dataclass(frozen=True)
class SingleEdgeModel:
    p: float
    q: float
    r: float
    T: int

    def __post_init__(self):
        for name in ("p", "q", "r"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")
        if self.T < 1:
            raise ValueError("T must be at least 1")

    @property
    def lam(self):
        return self.r / self.q

    @property
    def eta(self):
        return (1.0 - self.r) / (1.0 - self.q)


def _log_odds_against(model, n):
    """Natural log of ``eta^(T-n) lam^n (1-p) / p``."""
    n = np.asarray(n, dtype=float)
    return (
        (model.T - n) * math.log(model.eta)
        + n * math.log(model.lam)
        + math.log1p(-model.p)
        - math.log(model.p)
    )


def edge_posterior(model, n):
    """``P(a = 1 | n) = p / (p + eta^(T-n) lam^n (1-p))``."""
    n = np.asarray(n)
    if np.any((n < 0) | (n > model.T)):
        raise ValueError(f"n must lie in [0, {model.T}]")
    out = expit(-_log_odds_against(model, n))
    return out[()] if np.ndim(out) == 0 else out


def evidence_pmf(model):
    """``P(n)`` for n = 0..T."""
    n = np.arange(model.T + 1)
    return model.p * binom.pmf(n, model.T, model.q) + (1 - model.p) * binom.pmf(n, model.T, model.r)


def edge_posterior_entropy(model):
    """``H(G | X) = sum_n P(n) h(P(a = 1 | n))`` in bits."""
    n = np.arange(model.T + 1)
    log_a1 = math.log(model.p) + binom.logpmf(n, model.T, model.q)
    log_a0 = math.log1p(-model.p) + binom.logpmf(n, model.T, model.r)
    weights = np.exp(np.logaddexp(log_a1, log_a0))
    return float(np.sum(weights * binary_entropy(edge_posterior(model, n))))


def edge_posterior_entropy_bruteforce(model):
    """``-sum_n sum_a P(a, n) log2 P(a | n)`` term by term."""
    total = 0.0
    for n in range(model.T + 1):
        joint = [
            (1 - model.p) * binom.pmf(n, model.T, model.r),
            model.p * binom.pmf(n, model.T, model.q),
        ]
        evidence = joint[0] + joint[1]
        for pa in joint:
            if pa > 0:
                total -= pa * math.log(pa / evidence) / LN2
    return total


def edge_reconstructability(model):
    """``Psi = 1 - H(G | X) / h(p)``."""
    h = float(binary_entropy(model.p))
    return 1.0 - edge_posterior_entropy(model) / h


def curves(p, q, r, T, sweep="q", grid=None):
    """Rows for the CLI: posterior vs n (``sweep=None``), or Psi over a grid
    of q or T."""
    if sweep is None:
        model = SingleEdgeModel(p, q, r, T)
        n = np.arange(T + 1)
        return ["n,posterior"], [(int(k), float(v)) for k, v in zip(n, edge_posterior(model, n))]
    if sweep == "q":
        grid = grid if grid is not None else np.linspace(0.01, 0.99, 99)
        rows = [(float(v), edge_reconstructability(SingleEdgeModel(p, float(v), r, T))) for v in grid]
        return ["q,psi"], rows
    if sweep == "T":
        grid = grid if grid is not None else [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000]
        rows = [(int(v), edge_reconstructability(SingleEdgeModel(p, q, r, int(v)))) for v in grid]
        return ["T,psi"], rows
    raise ValueError(f"unknown sweep {sweep!r}")
