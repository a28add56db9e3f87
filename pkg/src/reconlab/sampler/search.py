"""Semi-greedy description-length search that fixes the edge count.

Blocks G, theta, phi are visited in turn. Each block draws K random
candidate changes, scores them by the change in ``log P(X, phi, G, theta)``
and commits the best one only if it improves the objective, so K = 1 is a
plain greedy hill-climb. Ties go to the first candidate drawn.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .._math import NEG_INF
from ..graph import Graph
from ..priors import Partition
from .moves import _partition_delta, _param_delta, MoveProposal
from .state import ChainState, apply_edge_changes, delta_log_prior, global_prior_term, likelihood_change

log = logging.getLogger(__name__)


@dataclass
class SearchResult:
    n_edges: int
    state: ChainState
    objective: list = field(default_factory=list)
    edge_counts: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = True

    @property
    def warning(self):
        return None if self.converged else "semi-greedy search hit max_iterations before E settled"


def log_objective(state):
    return state.log_likelihood + state.log_prior + state.log_param_density


def _edge_candidate(state, rng):
    """Random add / remove / hinge-flip as a list of ``(i, j, delta)``."""
    n = state.n_nodes
    e = state.graph.edge_total
    kind = int(rng.integers(3)) if e > 0 else 0
    if kind == 0:
        i, j = int(rng.integers(n)), int(rng.integers(n))
        if state.prior.graph_mode == "simple":
            while i == j and n > 1:
                j = int(rng.integers(n))
        return [(min(i, j), max(i, j), +1)]
    i, j = state.edges[int(rng.integers(e))].tolist()
    if kind == 1:
        return [(i, j, -1)]
    keep = i if rng.random() < 0.5 else j
    k = int(rng.integers(n))
    if (min(keep, k), max(keep, k)) == (i, j):
        return None
    return [(i, j, -1), (min(keep, k), max(keep, k), +1)]


def _edge_delta(state, changes):
    d_prior = delta_log_prior(state, changes)
    if d_prior == NEG_INF:
        return NEG_INF, 0.0
    d_e = sum(d for _, _, d in changes)
    if d_e:
        before = global_prior_term(state)
        after = global_prior_term(state, state.graph.edge_total + d_e)
        if after == NEG_INF:
            return NEG_INF, 0.0
        d_prior += after - before
    d_ll, d_bad = likelihood_change(state, changes)
    if d_bad != 0:
        return (-np.inf if d_bad > 0 else np.inf), d_prior
    return d_ll + d_prior, d_prior


def _graph_block(state, k, rng):
    best, best_changes, best_prior = 0.0, None, 0.0
    for _ in range(k):
        changes = _edge_candidate(state, rng)
        if changes is None:
            continue
        delta, d_prior = _edge_delta(state, changes)
        if delta > best:
            best, best_changes, best_prior = delta, changes, d_prior
    if best_changes is None:
        return False
    apply_edge_changes(state, best_changes)
    state.log_prior += best_prior
    return True


def _theta_block(state, k, rng):
    if not state.prior.has_partition or state.n_nodes < 2:
        return False
    best, best_cache = 0.0, None
    for _ in range(k):
        node = int(rng.integers(state.n_nodes))
        r = int(state.blocks[node])
        targets = [s for s in range(state.n_blocks) if s != r]
        if state.sizes[r] > 1:
            targets.append(state.n_blocks)
        if not targets:
            continue
        prop = MoveProposal("partition_move", node=node, target=targets[int(rng.integers(len(targets)))])
        _, cache = _partition_delta(state, prop)
        if cache is not None and cache[4] > best:
            best, best_cache = cache[4], cache
    if best_cache is None:
        return False
    state.blocks, state.sizes, state.ers, state.n_blocks, d_prior = best_cache
    state.log_prior += d_prior
    return True


def _phi_block(state, k, sigma, rng):
    if not state.dynamics.free:
        return False
    best, best_cache = 0.0, None
    for _ in range(k):
        name = state.dynamics.free[int(rng.integers(len(state.dynamics.free)))]
        old = state.dynamics.get(name)
        prop = MoveProposal("param_gaussian", name=name, old=old, new=old + sigma * rng.standard_normal())
        delta, cache = _param_delta(state, prop)
        if cache is not None and delta > best:
            best, best_cache = delta, cache
    if best_cache is None:
        return False
    state.dynamics, state.node_ll, state.node_bad = best_cache
    state.params = state.dynamics.param_vector()
    return True


def semi_greedy_search(x, prior, dynamics, config=None, rng=None, graph=None):
    """Maximize ``log P(X, phi, G, theta)`` blockwise to fix the edge count.

    Returns a :class:`SearchResult`; its ``state`` still carries the
    original edge-count prior.
    """
    from .chain import SamplerConfig

    config = config or SamplerConfig()
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    x = np.ascontiguousarray(x, dtype=np.uint8)
    n = x.shape[0]
    if graph is None:
        graph = Graph(n, "multi")
    partition = Partition(np.zeros(n, dtype=np.int64)) if prior.has_partition else None
    state = ChainState(x, prior, dynamics, graph, partition=partition, rng=rng)
    result = SearchResult(n_edges=state.graph.edge_total, state=state)
    stable = 0
    for it in range(config.max_iterations):
        e_before = state.graph.edge_total
        _graph_block(state, config.candidates_g, rng)
        _theta_block(state, config.candidates_theta, rng)
        _phi_block(state, config.candidates_phi, config.sigma_phi, rng)
        result.objective.append(log_objective(state))
        result.edge_counts.append(state.graph.edge_total)
        stable = stable + 1 if state.graph.edge_total == e_before else 0
        result.iterations = it + 1
        if stable >= config.patience:
            break
    else:
        result.converged = False
        log.warning(result.warning)
    result.n_edges = state.graph.edge_total
    return result
