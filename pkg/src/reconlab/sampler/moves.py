"""Metropolis-Hastings moves on G, theta (SBM partition) and phi.

Graph moves keep E fixed: a double-edge swap rewires two edges, a hinge flip
moves one endpoint of one edge. Proposal probabilities are computed exactly,
multiedges and self-loops included, so the ratio ``q(g'->g) / q(g->g')`` is
exact. This module is the plain-Python reference; ``_kernel.graph_sweep``
runs the same graph moves compiled.
"""

import math
from dataclasses import dataclass

import numpy as np

from .._math import NEG_INF
from ..dynamics import _transition_log_probs
from ..priors import block_term, global_term, lg2fact
from ._kernel import INFEASIBLE_PENALTY
from .state import (
    apply_edge_changes,
    delta_log_prior,
    likelihood_change,
    normalize_changes,
    _split_node_ll,
)

SWAP, HINGE = "double_edge_swap", "hinge_flip"


@dataclass
class MoveProposal:
    """A proposed change. For graph moves ``removed``/``added`` are sorted
    pairs and ``positions`` the edge-list rows of the removed edges."""

    kind: str
    removed: tuple = ()
    added: tuple = ()
    positions: tuple = ()
    log_q_ratio: float = 0.0
    name: str = None
    old: float = None
    new: float = None
    node: int = None
    target: int = None

    @property
    def changes(self):
        return [(i, j, -1) for i, j in self.removed] + [(i, j, +1) for i, j in self.added]


def _pair(a, b):
    return (min(a, b), max(a, b))


def _multiplicity(adj, i, j):
    return int(adj[i, i]) // 2 if i == j else int(adj[i, j])


def _rewirings(e1, e2):
    (a, b), (c, d) = e1, e2
    return [sorted([_pair(a, c), _pair(b, d)]), sorted([_pair(a, d), _pair(b, c)])]


def _selection_count(m1, m2, same):
    return m1 * (m1 - 1) if same else 2 * m1 * m2


def _hinge_count(e, f):
    return sum(1 for v in e if v in f)


def decode_graph_move(state, u, swap_prob=0.5):
    """Map five uniforms to a graph proposal (``None`` if no move exists)."""
    edges = state.edges
    e_count = len(edges)
    n = state.n_nodes
    if e_count == 0:
        return None
    if e_count >= 2 and u[0] < swap_prob:
        p1 = int(u[1] * e_count)
        p2 = int(u[2] * (e_count - 1))
        if p2 >= p1:
            p2 += 1
        e1, e2 = tuple(edges[p1].tolist()), tuple(edges[p2].tolist())
        (a, b), (c, d) = e1, e2
        f = [_pair(a, c), _pair(b, d)] if u[3] < 0.5 else [_pair(a, d), _pair(b, c)]
        return MoveProposal(SWAP, removed=(e1, e2), added=tuple(f), positions=(p1, p2))
    if swap_prob >= 1.0:
        return None
    p1 = int(u[1] * e_count)
    e = tuple(edges[p1].tolist())
    k = int(u[2] * n)
    keep = e[0] if u[3] < 0.5 else e[1]
    return MoveProposal(HINGE, removed=(e,), added=(_pair(keep, k),), positions=(p1,))


def graph_log_q_ratio(state, prop):
    """``log2 q(g' -> g) - log2 q(g -> g')``."""
    adj = state.graph.adjacency
    net = {}
    for i, j, d in normalize_changes(prop.changes):
        net[(i, j)] = net.get((i, j), 0) + d

    def after(pair):
        return _multiplicity(adj, *pair) + net.get(pair, 0)

    if prop.kind == SWAP:
        e1, e2 = prop.removed
        f1, f2 = prop.added
        fwd = _selection_count(_multiplicity(adj, *e1), _multiplicity(adj, *e2), e1 == e2)
        fwd *= sum(1 for r in _rewirings(e1, e2) if r == sorted([f1, f2]))
        rev = _selection_count(after(f1), after(f2), f1 == f2)
        rev *= sum(1 for r in _rewirings(f1, f2) if r == sorted([e1, e2]))
        return math.log2(rev) - math.log2(fwd)
    (e,), (f,) = prop.removed, prop.added
    fwd = _multiplicity(adj, *e) * _hinge_count(e, f)
    rev = after(f) * _hinge_count(f, e)
    return math.log2(rev) - math.log2(fwd)


def propose_graph_move(state, rng=None, swap_prob=0.5):
    rng = rng if rng is not None else state.rng
    prop = decode_graph_move(state, rng.random(5), swap_prob)
    if prop is not None and any(v != 0 for v in _net(prop).values()):
        prop.log_q_ratio = graph_log_q_ratio(state, prop)
    return prop


def _net(prop):
    net = {}
    for i, j, d in normalize_changes(prop.changes):
        net[(i, j)] = net.get((i, j), 0) + d
    return net


def _graph_log_acceptance(state, log_ratio, d_bad):
    """log2 MH ratio of a graph move; off the support impossible transitions
    cost ``INFEASIBLE_PENALTY`` bits each, on it they are forbidden."""
    if int(state.node_bad.sum()) == 0:
        return NEG_INF if d_bad > 0 else log_ratio
    return log_ratio - INFEASIBLE_PENALTY * d_bad


def graph_step(state, u, swap_prob=0.5):
    """One MH graph proposal driven by the uniforms ``u``; returns
    ``(proposal, accepted)``. Mirrors the compiled sweep exactly."""
    prop = decode_graph_move(state, u, swap_prob)
    if prop is None:
        return None, False
    state.stats[prop.kind][0] += 1
    if not any(v != 0 for v in _net(prop).values()):
        state.stats[prop.kind][1] += 1
        return prop, True
    d_prior = delta_log_prior(state, prop.changes)
    if d_prior == NEG_INF:
        return prop, False
    prop.log_q_ratio = graph_log_q_ratio(state, prop)
    d_ll, d_bad = likelihood_change(state, prop.changes)
    log_acc = _graph_log_acceptance(state, d_ll + d_prior + prop.log_q_ratio, d_bad)
    if log_acc < 0.0 and u[4] >= 2.0**log_acc:
        return prop, False
    state.stats[prop.kind][1] += 1
    apply_edge_changes(state, prop.changes, positions=prop.positions)
    state.log_prior += d_prior
    return prop, True


def mh_accept_log_prob(state, prop):
    """``min(0, log2 acceptance ratio)`` of a graph, partition or parameter
    proposal."""
    if prop.kind in (SWAP, HINGE):
        d_prior = delta_log_prior(state, prop.changes)
        if d_prior == NEG_INF:
            return NEG_INF
        d_ll, d_bad = likelihood_change(state, prop.changes)
        return min(0.0, _graph_log_acceptance(state, d_ll + d_prior + prop.log_q_ratio, d_bad))
    if prop.kind == "param_gaussian":
        return min(0.0, _param_delta(state, prop)[0])
    if prop.kind == "partition_move":
        return min(0.0, _partition_delta(state, prop)[0])
    raise ValueError(f"unknown move kind {prop.kind!r}")


# --------------------------------------------------------------------------
# phi: Gaussian random walk, out-of-bounds proposals rejected
# --------------------------------------------------------------------------


def _full_node_ll(state, dynamics):
    values = _transition_log_probs(dynamics, state.x, state.activity.n, state.activity.m)
    finite, bad = _split_node_ll(values)
    return finite.sum(axis=1), bad.sum(axis=1).astype(np.int64)


def _param_delta(state, prop):
    lo, hi = state.dynamics.bounds[prop.name]
    if not (lo <= prop.new <= hi):
        return NEG_INF, None
    values = state.dynamics.values()
    values[prop.name] = prop.new
    if not state.dynamics.is_valid(values):
        return NEG_INF, None
    new_model = state.dynamics.with_values(**{prop.name: prop.new})
    ll, bad = _full_node_ll(state, new_model)
    new_bad, old_bad = int(bad.sum()), int(state.node_bad.sum())
    if new_bad > old_bad:
        return NEG_INF, None
    cache = (new_model, ll, bad)
    if new_bad < old_bad:
        return 0.0, cache
    delta = float(ll.sum() - state.node_ll.sum())
    delta += new_model.log_param_density() - state.dynamics.log_param_density()
    return delta, cache


def param_step(state, name, sigma=0.1, rng=None):
    rng = rng if rng is not None else state.rng
    old = state.dynamics.get(name)
    prop = MoveProposal("param_gaussian", name=name, old=old, new=old + sigma * rng.standard_normal())
    state.stats["param_gaussian"][0] += 1
    log_acc, cache = _param_delta(state, prop)
    if log_acc == NEG_INF or (log_acc < 0 and rng.random() >= 2.0**log_acc):
        return prop, False
    state.dynamics, state.node_ll, state.node_bad = cache
    state.params = state.dynamics.param_vector()
    state.stats["param_gaussian"][1] += 1
    return prop, True


# --------------------------------------------------------------------------
# theta: single-node moves between SBM blocks
# --------------------------------------------------------------------------


def _n_targets(sizes, n_blocks, block):
    return (n_blocks - 1) + (1 if sizes[block] > 1 else 0)


def _block_sum(code, ers, sizes, n_blocks):
    total = 0.0
    for r in range(n_blocks):
        for s in range(r, n_blocks):
            t = block_term(code, r, s, int(ers[r, s]), int(sizes[r]), int(sizes[s]))
            if t == NEG_INF:
                return NEG_INF
            total += t
    return total


def _theta_prior(state, ers, sizes, n_blocks):
    """Partition-dependent part of ``log P(G, theta)``, theta unlabeled."""
    blocks = _block_sum(state.prior.code, ers, sizes, n_blocks)
    if blocks == NEG_INF:
        return NEG_INF
    g = global_term(state.prior, state.n_nodes, state.graph.edge_total, sizes[:n_blocks])
    return blocks + g + lg2fact(n_blocks)


def _moved_partition(state, node, target):
    """Blocks, sizes, edge matrix and B after moving ``node`` to ``target``
    (``target == n_blocks`` opens a new block). Emptied blocks are filled
    with the last label so labels stay ``0..B-1``."""
    blocks = state.blocks.copy()
    sizes = state.sizes.copy()
    ers = state.ers.copy()
    nb = state.n_blocks
    r = int(blocks[node])
    adj_row = state.graph.adjacency[node].copy()
    loops = int(adj_row[node])
    adj_row[node] = 0
    v = np.bincount(blocks, weights=adj_row, minlength=len(sizes)).astype(np.int64)
    ers[r, :] -= v
    ers[:, r] -= v
    ers[r, r] -= loops
    s = target
    if s == nb:
        nb += 1
    ers[s, :] += v
    ers[:, s] += v
    ers[s, s] += loops
    blocks[node] = s
    sizes[r] -= 1
    sizes[s] += 1
    if sizes[r] == 0:
        last = nb - 1
        if r != last:
            blocks[blocks == last] = r
            ers[[r, last], :] = ers[[last, r], :]
            ers[:, [r, last]] = ers[:, [last, r]]
            sizes[r], sizes[last] = sizes[last], sizes[r]
        nb -= 1
    return blocks, sizes, ers, nb


def _partition_delta(state, prop):
    node, target = prop.node, prop.target
    blocks, sizes, ers, nb = _moved_partition(state, node, target)
    old = _theta_prior(state, state.ers, state.sizes, state.n_blocks)
    new = _theta_prior(state, ers, sizes, nb)
    if new == NEG_INF:
        return NEG_INF, None
    c_fwd = _n_targets(state.sizes, state.n_blocks, int(state.blocks[node]))
    c_rev = _n_targets(sizes, nb, int(blocks[node]))
    return new - old + math.log2(c_fwd) - math.log2(c_rev), (blocks, sizes, ers, nb, new - old)


def propose_partition_move(state, rng=None):
    rng = rng if rng is not None else state.rng
    node = int(rng.integers(state.n_nodes))
    r = int(state.blocks[node])
    nb = state.n_blocks
    targets = [s for s in range(nb) if s != r]
    if state.sizes[r] > 1:
        targets.append(nb)
    if not targets:
        return None
    target = targets[int(rng.integers(len(targets)))]
    return MoveProposal("partition_move", node=node, target=target)


def partition_step(state, rng=None):
    rng = rng if rng is not None else state.rng
    prop = propose_partition_move(state, rng)
    if prop is None:
        return None, False
    state.stats["partition_move"][0] += 1
    log_acc, cache = _partition_delta(state, prop)
    if log_acc == NEG_INF or (log_acc < 0 and rng.random() >= 2.0**log_acc):
        return prop, False
    state.blocks, state.sizes, state.ers, state.n_blocks, d_prior = cache
    state.log_prior += d_prior
    state.stats["partition_move"][1] += 1
    return prop, True
