"""Exact information quantities by enumerating graphs (and, for tiny T,
time series). Only meant for a handful of nodes."""

import itertools
import math

import numpy as np
from scipy.special import logsumexp

from .._math import LN2, NEG_INF, binary_entropy, logsumexp2
from ..dynamics import log_likelihood, simulate
from ..graph import Graph
from ..priors import enumerate_graphs, enumerate_partitions, enumerate_prior_support, log_prior, sample_prior

MAX_ENUM_NODES = 6


def _check_size(n_nodes, mode="simple"):
    if n_nodes > MAX_ENUM_NODES:
        raise ValueError(f"graph space of {n_nodes} nodes is too large to enumerate (max {MAX_ENUM_NODES})")


class DynamicsChannel:
    """Adapter exposing a dynamics model as ``P(x | g)`` for the MI routines."""

    def __init__(self, dynamics, T):
        self.dynamics = dynamics
        self.T = T

    def sample(self, g, rng):
        return simulate(g, self.dynamics, self.T, rng)

    def log_prob(self, g, x):
        return log_likelihood(g, self.dynamics, x, include_initial=True)


def _quadrature(dynamics, n_points):
    """Tensor Gauss-Legendre nodes over the free-parameter box with log2
    weights (prior density folded in)."""
    names = list(dynamics.free)
    x_std, w_std = np.polynomial.legendre.leggauss(n_points)
    axes = []
    for name in names:
        lo, hi = dynamics.bounds[name]
        axes.append((0.5 * (hi - lo) * x_std + 0.5 * (hi + lo), 0.5 * (hi - lo) * w_std))
    for combo in itertools.product(range(n_points), repeat=len(names)):
        values = {name: axes[k][0][c] for k, (name, c) in enumerate(zip(names, combo))}
        weight = math.prod(axes[k][1][c] for k, c in enumerate(combo))
        valid = dynamics.is_valid({**dynamics.values(), **values})
        if not valid:
            continue
        model = dynamics.with_values(**values)
        yield model, math.log2(weight) + model.log_param_density()


def graph_support(prior, n_nodes):
    """``[(graph, log P(graph))]`` with hyperparameters summed out."""
    _check_size(n_nodes)
    return enumerate_prior_support(prior, n_nodes)


def enumerate_evidence(x, prior, dynamics, support=None, n_quad=48):
    """``log2 sum_g P(g) P(x | g)``, integrating free dynamics parameters by
    Gauss-Legendre quadrature against their uniform prior."""
    x = np.asarray(x)
    support = support if support is not None else graph_support(prior, x.shape[0])
    if not dynamics.free:
        return logsumexp2([lp + log_likelihood(g, dynamics, x) for g, lp in support])
    terms = []
    for model, lw in _quadrature(dynamics, n_quad):
        terms.append(lw + logsumexp2([lp + log_likelihood(g, model, x) for g, lp in support]))
    return logsumexp2(terms)


def enumerate_posterior(x, prior, dynamics, support=None):
    """Exact ``[(graph, log2 P(graph | x))]`` at fixed dynamics parameters."""
    x = np.asarray(x)
    support = support if support is not None else graph_support(prior, x.shape[0])
    joint = np.array([lp + log_likelihood(g, dynamics, x) for g, lp in support])
    log_z = logsumexp2(joint)
    return [(g, float(v - log_z)) for (g, _), v in zip(support, joint)]


def posterior_entropy(posterior):
    logs = np.array([lp for _, lp in posterior])
    p = np.exp2(logs)
    mask = p > 0
    return float(-np.sum(p[mask] * logs[mask]))


def enumerate_mutual_information(prior, channel, n_nodes, K, rng, support=None):
    """Monte Carlo ``I(G; X)`` with exact evidence: average of
    ``log P(x|g) - log P(x)`` over joint draws. Returns ``(mean, standard error)``."""
    if K < 2:
        raise ValueError("need at least two joint samples")
    support = support if support is not None else graph_support(prior, n_nodes)
    values = np.empty(K)
    for k in range(K):
        g, _ = sample_prior(prior, rng, n_nodes)
        x = channel.sample(g, rng)
        evidence = logsumexp2([lp + channel.log_prob(h, x) for h, lp in support])
        values[k] = channel.log_prob(g, x) - evidence
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(K))


def all_time_series(n_nodes, T):
    """Every binary ``(N, T)`` array, stacked as ``(2**(N*T), N, T)``."""
    bits = n_nodes * T
    if bits > 20:
        raise ValueError(f"{bits} binary entries are too many to enumerate")
    codes = np.arange(2**bits, dtype=np.int64)
    flat = (codes[:, None] >> np.arange(bits)) & 1
    return flat.reshape(-1, n_nodes, T).astype(np.uint8)


def _log_likelihood_table(graphs, dynamics, series):
    """``L[g, x] = log2 P(x | g)`` including the Bernoulli(1/2) initial state."""
    from ..dynamics import _transition_log_probs

    k, n_nodes, T = series.shape
    flat = series.reshape(k * n_nodes, T)
    table = np.empty((len(graphs), k))
    for gi, g in enumerate(graphs):
        m = np.einsum("ij,kjt->kit", g.adjacency.astype(np.int64), series.astype(np.int64))
        n = g.degrees[None, :, None] - m
        lp = _transition_log_probs(dynamics, flat, n.reshape(k * n_nodes, T), m.reshape(k * n_nodes, T))
        table[gi] = lp.reshape(k, -1).sum(axis=1) - n_nodes
    return table


def exact_mutual_information(log_prior_values, likelihood_table):
    """``I(G; X)`` from a prior vector and a ``[graph, series]`` log-likelihood
    table, both log2."""
    lp = np.asarray(log_prior_values, dtype=float)
    table = np.asarray(likelihood_table, dtype=float)
    joint = lp[:, None] + table
    log_px = logsumexp(joint * LN2, axis=0) / LN2
    pj = np.exp2(joint)
    diff = np.where(pj > 0, table - log_px[None, :], 0.0)
    return float(np.sum(pj * diff))


def exact_mutual_information_model(prior, dynamics, n_nodes, T, with_partition=False):
    """Exact ``I(G; X)`` by double enumeration. With ``with_partition`` the
    SBM partition is kept as part of the latent variable, giving
    ``I(theta, G; X)``."""
    series = all_time_series(n_nodes, T)
    if with_partition:
        if not prior.has_partition:
            raise ValueError("with_partition needs an SBM prior")
        e = int(prior.edge_count.value)
        graphs, lps = [], []
        for g in enumerate_graphs(n_nodes, e, prior.graph_mode):
            for b in enumerate_partitions(n_nodes):
                lp = log_prior(prior, g, b)
                if lp != NEG_INF:
                    graphs.append(g)
                    lps.append(lp)
    else:
        support = graph_support(prior, n_nodes)
        graphs = [g for g, _ in support]
        lps = [lp for _, lp in support]
    # normalize: literal-binomial SBM support is sub-normalized
    lps = np.array(lps) - logsumexp2(lps)
    return exact_mutual_information(lps, _log_likelihood_table(graphs, dynamics, series))


def delta_prior_reconstructability(g_star, dynamics, eps_grid, T, mode="simple", same_edge_count=True):
    """Exact ``Psi(eps) = I(X; G) / H(G)`` under the prior that returns
    ``g_star`` with probability ``1 - eps`` and any other graph uniformly.
    The alternatives are the graphs with the same edge count, or every graph
    on the node set when ``same_edge_count`` is false.

    Small eps is handled with ``log1p`` so the O(eps) mutual information is
    not lost to cancellation.
    """
    eps_grid = np.asarray(eps_grid, dtype=float)
    if np.any((eps_grid <= 0) | (eps_grid >= 1)):
        raise ValueError("eps must lie in (0, 1)")
    n = g_star.n_nodes
    _check_size(n)
    if same_edge_count:
        counts = [g_star.edge_total]
    else:
        counts = range(n * (n - 1) // 2 + 1) if mode == "simple" else range(n * (n + 1) // 2 + 1)
    others = [g for e in counts for g in enumerate_graphs(n, e, mode) if g != g_star]
    z = len(others)
    if z == 0:
        raise ValueError("g_star is the only graph in the space")
    series = all_time_series(n, T)
    table = _log_likelihood_table([g_star] + others, dynamics, series)
    ln_star = table[0] * LN2
    ln_other = table[1:] * LN2
    ln_q = logsumexp(ln_other, axis=0) - math.log(z)
    p_star = np.exp(ln_star)
    p_other = np.exp(ln_other)
    out = []
    for eps in eps_grid:
        # ln P(x) - ln p*(x) = ln(1 + eps (q/p* - 1)), evaluated stably
        live = p_star > 0
        ratio = np.exp(ln_q[live] - ln_star[live])
        ln_px_minus_star = np.log1p(eps * (ratio - 1.0))
        term_star = -(1.0 - eps) * np.sum(p_star[live] * ln_px_minus_star)
        ln_px = np.logaddexp(math.log1p(-eps) + ln_star, math.log(eps) + ln_q)
        term_other = (eps / z) * np.sum(p_other * (ln_other - ln_px[None, :]))
        mi = (term_star + term_other) / LN2
        h_g = float(binary_entropy(eps)) + eps * math.log2(z)
        out.append(mi / h_g)
    return np.array(out)


def uniform_graph_identity_channel():
    """Toy noiseless channel where x is a bit-encoding of the graph itself
    (used to check that MI equals H(G) in the lossless limit)."""

    class _Identity:
        def sample(self, g, rng):
            return g.adjacency[np.triu_indices(g.n_nodes, k=1)].copy()

        def log_prob(self, g, x):
            same = np.array_equal(g.adjacency[np.triu_indices(g.n_nodes, k=1)], x)
            return 0.0 if same else NEG_INF

    return _Identity()
