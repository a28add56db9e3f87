"""Mutable MCMC state with cached neighbor counts and per-node likelihoods.

Likelihood caches are kept per node as ``(finite part, number of impossible
transitions)``. A state with impossible transitions has likelihood ``-inf``;
keeping the count lets a chain started in such a state climb out of it.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .._math import NEG_INF
from ..dynamics import _transition_log_probs, log_likelihood
from ..graph import Graph, neighbor_activity
from ..priors import (
    SBM,
    SBM_MULTI,
    Partition,
    block_edge_matrix,
    block_term,
    global_term,
    lg2fact,
    log_prior,
    node_term,
    pair_term,
)


@dataclass
class PosteriorSample:
    """One retained chain state."""

    edges: np.ndarray
    n_nodes: int
    mode: str
    log_likelihood: float
    log_prior: float
    log_param_density: float = 0.0
    phi: dict = field(default_factory=dict)
    partition: np.ndarray = None

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def log_joint(self):
        return self.log_likelihood + self.log_prior + self.log_param_density

    def graph(self):
        return Graph.from_edges(self.n_nodes, [tuple(e) for e in self.edges], mode=self.mode)

    def adjacency(self):
        a = np.zeros((self.n_nodes, self.n_nodes), dtype=np.int64)
        np.add.at(a, (self.edges[:, 0], self.edges[:, 1]), 1)
        np.add.at(a, (self.edges[:, 1], self.edges[:, 0]), 1)
        return a


def _split_node_ll(values):
    bad = np.isneginf(values)
    return np.where(bad, 0.0, values), bad


class ChainState:
    """Current ``(G, theta, phi)`` plus every cache the moves rely on.

    Parameters
    ----------
    x : array (N, T)
    prior : PriorModel
    dynamics : DynamicsModel
    graph : Graph
    partition : Partition, optional
        Required for the SBM prior.
    rng : numpy.random.Generator
    """

    def __init__(self, x, prior, dynamics, graph, partition=None, rng=None):
        self.x = np.ascontiguousarray(x, dtype=np.uint8)
        if self.x.shape[0] != graph.n_nodes:
            raise ValueError("time series and graph disagree on the number of nodes")
        if prior.degrees is not None and len(prior.degrees) != graph.n_nodes:
            raise ValueError(f"degree sequence has {len(prior.degrees)} entries for {graph.n_nodes} nodes")
        self.prior = prior
        self.dynamics = dynamics
        self.graph = graph.copy()
        self.graph.mode = "multi"  # support constraints are enforced by the prior
        self.rng = rng if rng is not None else np.random.default_rng()
        self.edges = graph.edge_array()
        if prior.has_partition:
            if partition is None:
                raise ValueError("the SBM prior needs an initial partition")
            n = graph.n_nodes
            self.blocks = partition.assignments.copy()
            self.sizes = np.zeros(n, dtype=np.int64)
            self.sizes[: partition.n_blocks] = partition.sizes
            self.n_blocks = partition.n_blocks
            self.ers = np.zeros((n, n), dtype=np.int64)
            b = partition.n_blocks
            self.ers[:b, :b] = block_edge_matrix(graph, partition)
        else:
            self.blocks = np.zeros(graph.n_nodes, dtype=np.int64)
            self.sizes = np.zeros(1, dtype=np.int64)
            self.n_blocks = 0
            self.ers = np.zeros((1, 1), dtype=np.int64)
        self.k_fixed = (
            np.asarray(prior.degrees, dtype=np.int64)
            if prior.degrees is not None
            else np.zeros(graph.n_nodes, dtype=np.int64)
        )
        self.stats = {
            "double_edge_swap": [0, 0],
            "hinge_flip": [0, 0],
            "param_gaussian": [0, 0],
            "partition_move": [0, 0],
        }
        self.refresh()

    # -- cached quantities -------------------------------------------------

    @property
    def n_nodes(self):
        return self.graph.n_nodes

    @property
    def partition(self):
        if not self.prior.has_partition:
            return None
        return Partition(self.blocks.copy())

    def refresh(self):
        """Recompute every cache from scratch."""
        self.activity = neighbor_activity(self.graph, self.x)
        self.params = self.dynamics.param_vector()
        if self.x.shape[1] >= 2:
            values = _transition_log_probs(self.dynamics, self.x, self.activity.n, self.activity.m)
            finite, bad = _split_node_ll(values)
            self.node_ll = finite.sum(axis=1)
            self.node_bad = bad.sum(axis=1).astype(np.int64)
        else:
            self.node_ll = np.zeros(self.n_nodes)
            self.node_bad = np.zeros(self.n_nodes, dtype=np.int64)
        self.log_prior = self.compute_log_prior()

    @property
    def log_likelihood(self):
        if self.node_bad.sum() > 0:
            return NEG_INF
        return float(self.node_ll.sum())

    @property
    def log_param_density(self):
        return self.dynamics.log_param_density()

    @property
    def log_posterior(self):
        return self.log_likelihood + self.log_prior + self.log_param_density

    def compute_log_prior(self):
        """``log P(G, theta)``; for the SBM theta is the partition up to
        relabeling, hence the extra ``log B!``."""
        g = self.graph
        if self.prior.has_partition:
            value = log_prior(self.prior, g, self.partition)
            return value + lg2fact(self.n_blocks) if value != NEG_INF else value
        return log_prior(self.prior, g)

    def audit(self, tol=1e-8):
        """Assert that every cache equals a fresh recomputation."""
        self.graph.audit()
        fresh = neighbor_activity(self.graph, self.x)
        assert np.array_equal(fresh.m, self.activity.m), "stale active-neighbor counts"
        assert np.array_equal(fresh.n, self.activity.n), "stale inactive-neighbor counts"
        assert sorted(map(tuple, self.edges.tolist())) == sorted(
            (i, j) for i, j, k in self.graph.edges() for _ in range(k)
        ), "stale edge list"
        ll = log_likelihood(self.graph, self.dynamics, self.x)
        if ll == NEG_INF:
            assert self.log_likelihood == NEG_INF
        else:
            assert abs(ll - self.log_likelihood) < tol * max(1.0, abs(ll)), (ll, self.log_likelihood)
        if self.prior.has_partition:
            b = self.n_blocks
            assert np.array_equal(self.ers[:b, :b], block_edge_matrix(self.graph, self.partition))
            assert np.array_equal(self.sizes[:b], self.partition.sizes)
        lp = self.compute_log_prior()
        assert abs(lp - self.log_prior) < tol * max(1.0, abs(lp)), (lp, self.log_prior)

    def snapshot(self):
        return PosteriorSample(
            edges=self.edges.copy(),
            n_nodes=self.n_nodes,
            mode=self.prior.graph_mode,
            log_likelihood=self.log_likelihood,
            log_prior=self.log_prior,
            log_param_density=self.log_param_density,
            phi={name: self.dynamics.get(name) for name in self.dynamics.free},
            partition=self.blocks.copy() if self.prior.has_partition else None,
        )


# --------------------------------------------------------------------------
# Incremental deltas (reference implementation; the numba kernel mirrors it)
# --------------------------------------------------------------------------


def normalize_changes(changes):
    return [(min(i, j), max(i, j), int(d)) for i, j, d in changes]


def _node_coefficients(changes, u):
    coefs = {}
    for i, j, d in changes:
        if i == u and j == u:
            coefs[u] = coefs.get(u, 0) + 2 * d
        elif i == u:
            coefs[j] = coefs.get(j, 0) + d
        elif j == u:
            coefs[i] = coefs.get(i, 0) + d
    return coefs


def node_likelihood_after(state, u, changes):
    """``(finite part, impossible count)`` of node u's likelihood after the
    edge changes."""
    coefs = _node_coefficients(changes, u)
    m_row = state.activity.m[u].astype(np.int64).copy()
    for v, c in coefs.items():
        m_row += c * state.x[v].astype(np.int64)
    deg = state.graph.degrees[u] + sum(coefs.values())
    n_row = deg - m_row
    values = _transition_log_probs(state.dynamics, state.x[u : u + 1], n_row[None, :], m_row[None, :])
    finite, bad = _split_node_ll(values[0])
    return float(finite.sum()), int(bad.sum())


def affected_nodes(changes):
    nodes = []
    for i, j, _ in changes:
        for u in (i, j):
            if u not in nodes:
                nodes.append(u)
    return nodes


def likelihood_change(state, changes):
    """``(finite delta, delta of impossible-transition count)``."""
    changes = normalize_changes(changes)
    d_ll, d_bad = 0.0, 0
    for u in affected_nodes(changes):
        ll, bad = node_likelihood_after(state, u, changes)
        d_ll += ll - state.node_ll[u]
        d_bad += bad - int(state.node_bad[u])
    return d_ll, d_bad


def delta_log_likelihood(state, changes):
    """``log P(x | G') - log P(x | G)`` for a list of ``(i, j, delta)`` edge
    changes, touching only the endpoints across the T steps."""
    d_ll, d_bad = likelihood_change(state, changes)
    before_bad = int(state.node_bad.sum())
    after_bad = before_bad + d_bad
    if after_bad > 0 and before_bad == 0:
        return NEG_INF
    if before_bad > 0 and after_bad == 0:
        return math.inf
    if before_bad > 0:
        return math.nan if d_bad == 0 else math.copysign(math.inf, -d_bad)
    return d_ll


def _pair_deltas(changes):
    net = {}
    for i, j, d in changes:
        net[(i, j)] = net.get((i, j), 0) + d
    return {k: v for k, v in net.items() if v != 0}


def delta_log_prior(state, changes):
    """Change of ``log P(G, theta)`` under edge changes at fixed E."""
    changes = normalize_changes(changes)
    code = state.prior.code
    adj = state.graph.adjacency
    total = 0.0
    pairs = _pair_deltas(changes)
    for (i, j), d in pairs.items():
        old = int(adj[i, j])
        new = old + (2 * d if i == j else d)
        if new < 0:
            return NEG_INF
        after = pair_term(code, i, j, new)
        if after == NEG_INF:
            return NEG_INF
        total += after - pair_term(code, i, j, old)
    deg_change = {}
    for i, j, d in changes:
        deg_change[i] = deg_change.get(i, 0) + d
        deg_change[j] = deg_change.get(j, 0) + d
    for u, d in deg_change.items():
        if d == 0:
            continue
        k = int(state.graph.degrees[u])
        after = node_term(code, k + d, int(state.k_fixed[u]))
        if after == NEG_INF:
            return NEG_INF
        total += after - node_term(code, k, int(state.k_fixed[u]))
    if code in (SBM, SBM_MULTI):
        block_change = {}
        for i, j, d in changes:
            r, s = sorted((int(state.blocks[i]), int(state.blocks[j])))
            block_change[(r, s)] = block_change.get((r, s), 0) + (2 * d if r == s else d)
        for (r, s), d in block_change.items():
            if d == 0:
                continue
            old = int(state.ers[r, s])
            nr, ns = int(state.sizes[r]), int(state.sizes[s])
            after = block_term(code, r, s, old + d, nr, ns)
            if after == NEG_INF:
                return NEG_INF
            total += after - block_term(code, r, s, old, nr, ns)
    return total


def apply_edge_changes(state, changes, positions=None):
    """Mutate graph, edge list, activity and likelihood caches.

    ``positions`` gives the edge-list rows of removed edges, which the
    added edges overwrite; without it rows are looked up.
    """
    changes = normalize_changes(changes)
    for u in affected_nodes(changes):
        ll, bad = node_likelihood_after(state, u, changes)
        state.node_ll[u] = ll
        state.node_bad[u] = bad
    removed = [(i, j) for i, j, d in changes if d < 0]
    added = [(i, j) for i, j, d in changes if d > 0]
    if positions is None:
        positions = []
        for i, j in removed:
            rows = np.flatnonzero((state.edges[:, 0] == i) & (state.edges[:, 1] == j))
            rows = [r for r in rows.tolist() if r not in positions]
            positions.append(rows[0])
    positions = list(positions)
    new_rows = state.edges.tolist()
    for pos, (i, j) in zip(positions, added):
        new_rows[pos] = [i, j]
    drop = positions[len(added):]
    new_rows = [r for k, r in enumerate(new_rows) if k not in drop]
    new_rows += [[i, j] for i, j in added[len(positions):]]
    state.edges = np.array(new_rows, dtype=np.int64).reshape(-1, 2)
    x = state.x
    for i, j, d in changes:
        if state.prior.has_partition:
            r, s = int(state.blocks[i]), int(state.blocks[j])
            if r == s:
                state.ers[r, r] += 2 * d
            else:
                state.ers[r, s] += d
                state.ers[s, r] += d
        state.graph.toggle_edge(i, j, d)
        xi = x[i].astype(np.int64)
        if i == j:
            state.activity.m[i] += 2 * d * xi
            state.activity.n[i] += 2 * d * (1 - xi)
        else:
            xj = x[j].astype(np.int64)
            state.activity.m[i] += d * xj
            state.activity.n[i] += d * (1 - xj)
            state.activity.m[j] += d * xi
            state.activity.n[j] += d * (1 - xi)


def global_prior_term(state, n_edges=None):
    sizes = state.sizes[: state.n_blocks] if state.prior.has_partition else None
    e = state.graph.edge_total if n_edges is None else n_edges
    return global_term(state.prior, state.n_nodes, e, sizes)
