"""Posterior predictive checks: simulate from posterior draws and locate the
observed test statistics among the synthetic ones."""

import math
from dataclasses import dataclass, field

import numpy as np

from ..dynamics import simulate
from ..heuristics import correlation_scores
from ..infotheory import EdgeMarginals

STATISTICS = ("firing_rate", "corr_connected", "corr_disconnected")
BAND = (0.05, 0.95)
EXTREME = (0.01, 0.99)


def _pair_mask(pi, threshold):
    n = pi.shape[0]
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    connected = upper & (pi >= threshold)
    return connected, upper & ~connected


def statistics(x, connected, disconnected):
    """Scalar summaries of one series: mean firing rate and the mean
    correlation over posterior-connected and disconnected pairs."""
    x = np.asarray(x, dtype=float)
    out = {"firing_rate": float(x.mean())}
    corr = correlation_scores(x).directed if x.shape[1] >= 2 else np.zeros((x.shape[0],) * 2)
    out["corr_connected"] = float(corr[connected].mean()) if connected.any() else math.nan
    out["corr_disconnected"] = float(corr[disconnected].mean()) if disconnected.any() else math.nan
    return out


def node_rates(x):
    return np.asarray(x, dtype=float).mean(axis=1)


def mid_quantile(observed, synthetic):
    """Fraction of synthetic values below the observed one, ties counted
    one half."""
    s = np.asarray(synthetic, dtype=float)
    s = s[np.isfinite(s)]
    if len(s) == 0 or not math.isfinite(observed):
        return math.nan
    return float((np.sum(s < observed) + 0.5 * np.sum(s == observed)) / len(s))


@dataclass
class StatisticCheck:
    name: str
    observed: float
    synthetic: list
    quantile: float
    band: tuple

    @property
    def inside_band(self):
        return bool(BAND[0] <= self.quantile <= BAND[1]) if math.isfinite(self.quantile) else False

    @property
    def extreme(self):
        return bool(self.quantile < EXTREME[0] or self.quantile > EXTREME[1]) if math.isfinite(self.quantile) else False

    def to_dict(self):
        return {
            "observed": self.observed,
            "quantile": self.quantile,
            "band": list(self.band),
            "inside_band": self.inside_band,
            "extreme": self.extreme,
            "synthetic": self.synthetic,
        }


@dataclass
class PPCReport:
    checks: dict
    node_rate_quantiles: list
    K: int
    flags: list = field(default_factory=list)

    def to_dict(self):
        return {
            "K": self.K,
            "statistics": {k: v.to_dict() for k, v in self.checks.items()},
            "node_rate_quantiles": self.node_rate_quantiles,
            "flags": self.flags,
        }


def posterior_predictive_check(samples, x, dynamics, stats=STATISTICS, K=100, rng=None, threshold=0.5):
    """Draw ``K`` posterior samples (with replacement), simulate a series of
    the observed length from each, and report where ``tau(x)`` falls.

    ``dynamics`` supplies the fixed parameters; free ones are taken from
    each posterior sample.
    """
    if K < 2:
        raise ValueError("K must be at least 2")
    if not samples:
        raise ValueError("no posterior samples")
    unknown = set(stats) - set(STATISTICS)
    if unknown:
        raise ValueError(f"unknown statistics {sorted(unknown)}; choose from {STATISTICS}")
    rng = rng if rng is not None else np.random.default_rng()
    x = np.asarray(x)
    pi = EdgeMarginals.from_samples(samples).edge_probability
    connected, disconnected = _pair_mask(pi, threshold)
    observed = statistics(x, connected, disconnected)
    obs_rates = node_rates(x)
    synthetic = {name: [] for name in stats}
    syn_rates = []
    for k in rng.integers(0, len(samples), size=K):
        s = samples[k]
        dyn = dynamics.with_values(**s.phi) if s.phi else dynamics
        xs = simulate(s.graph(), dyn, x.shape[1], rng)
        values = statistics(xs, connected, disconnected)
        for name in stats:
            synthetic[name].append(values[name])
        syn_rates.append(node_rates(xs))
    checks = {}
    flags = []
    for name in stats:
        syn = np.asarray(synthetic[name])
        finite = syn[np.isfinite(syn)]
        band = tuple(np.quantile(finite, BAND).tolist()) if len(finite) else (math.nan, math.nan)
        chk = StatisticCheck(name, observed[name], syn.tolist(), mid_quantile(observed[name], syn), band)
        if chk.extreme:
            flags.append(f"extreme_quantile:{name}")
        checks[name] = chk
    syn_rates = np.array(syn_rates)
    node_q = [mid_quantile(obs_rates[i], syn_rates[:, i]) for i in range(len(obs_rates))]
    return PPCReport(checks, node_q, K, flags)
