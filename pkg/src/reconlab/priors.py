"""Graph priors: Erdos-Renyi, configuration model (fixed and uniform degree
hyperprior) and the microcanonical stochastic block model.

All log-probabilities are in bits. A graph outside a prior's support gets
``NEG_INF``.

The joint log-prior decomposes as::

    log P(G, theta) = global(E, B, sizes) + sum_{i<=j} pair(a_ij)
                      + sum_i node(k_i) + sum_{r<=s} block(e_rs)

which is what lets the sampler evaluate prior ratios incrementally. The
scalar term functions below only use ``math`` so they can be compiled by
numba unchanged.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from ._math import (
    LN2,
    NEG_INF,
    log2_binom,
    log2_double_factorial_odd,
    log2_even_double_factorial,
    log2_factorial,
    log2_multiset,
    logsumexp2,
)
from .graph import Graph

PRIOR_KINDS = ("er_simple", "er_multi", "cm", "ucm", "sbm")

ER_SIMPLE, ER_MULTI, CM, UCM, SBM, SBM_MULTI = range(6)


# --------------------------------------------------------------------------
# Scalar terms (numba-compatible)
# --------------------------------------------------------------------------


@njit(cache=True)
def lg2fact(n):
    return math.lgamma(n + 1.0) / LN2


@njit(cache=True)
def lg2binom(n, k):
    if k < 0 or k > n:
        return -math.inf
    return (math.lgamma(n + 1.0) - math.lgamma(k + 1.0) - math.lgamma(n - k + 1.0)) / LN2


@njit(cache=True)
def lg2multiset(n, k):
    return lg2binom(n + k - 1.0, k)


@njit(cache=True)
def pair_term(code, i, j, a):
    """Contribution of the pair (i, j) holding adjacency entry ``a``."""
    if code == ER_SIMPLE:
        if a == 0 or (i != j and a == 1):
            return 0.0
        return -math.inf
    if code == CM or code == UCM:
        if i == j:
            half = a // 2
            return -(half + lg2fact(half))
        return -lg2fact(a)
    if code == SBM:
        if i != j and a <= 1:
            return 0.0
        if i == j and (a == 0 or a == 2):
            return 0.0
        return -math.inf
    return 0.0


@njit(cache=True)
def node_term(code, k, k_fixed):
    if code == CM:
        if k != k_fixed:
            return -math.inf
        return lg2fact(k)
    if code == UCM:
        return lg2fact(k)
    return 0.0


@njit(cache=True)
def block_term(code, r, s, e_rs, n_r, n_s):
    """Graph-given-edge-matrix term for block pair r <= s."""
    if code == SBM:
        if r == s:
            return -lg2binom(n_r * (n_r + 1) / 2.0, e_rs / 2.0)
        return -lg2binom(n_r * n_s, e_rs)
    if code == SBM_MULTI:
        if r == s:
            return -lg2multiset(n_r * (n_r + 1) / 2.0, e_rs / 2.0)
        return -lg2multiset(n_r * n_s, e_rs)
    return 0.0


# --------------------------------------------------------------------------
# Model specification
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeCountPrior:
    """Prior over the number of edges: ``delta`` at ``value`` or ``geometric``
    with mean ``value``."""

    kind: str = "delta"
    value: float = 0

    def __post_init__(self):
        if self.kind not in ("delta", "geometric"):
            raise ValueError(f"unknown edge-count prior {self.kind!r}")
        if self.value < 0:
            raise ValueError("edge-count prior parameter must be non-negative")

    def log_prob(self, e):
        return log_edge_count_prior(e, self)

    def sample(self, rng):
        if self.kind == "delta":
            return int(self.value)
        # failures before first success with p = 1 / (mean + 1)
        return int(rng.geometric(1.0 / (self.value + 1.0)) - 1)

    def to_dict(self):
        return {self.kind: self.value}

    @classmethod
    def from_dict(cls, spec):
        if isinstance(spec, (int, np.integer)):
            return cls("delta", int(spec))
        (kind, value), = spec.items()
        return cls(kind, value)


@dataclass
class Partition:
    """Node-to-block assignment with blocks labeled ``0..B-1``, all non-empty."""

    assignments: np.ndarray

    def __post_init__(self):
        self.assignments = np.asarray(self.assignments, dtype=np.int64)
        if self.assignments.size == 0:
            raise ValueError("partition of zero nodes")
        b = self.n_blocks
        sizes = np.bincount(self.assignments, minlength=b)
        if self.assignments.min() < 0 or np.any(sizes == 0):
            raise ValueError("blocks must be labeled 0..B-1 and non-empty")

    @property
    def n_blocks(self):
        return int(self.assignments.max()) + 1

    @property
    def sizes(self):
        return np.bincount(self.assignments, minlength=self.n_blocks)

    def copy(self):
        return Partition(self.assignments.copy())

    @classmethod
    def compact(cls, labels):
        """Relabel arbitrary labels to 0..B-1 in order of first appearance."""
        _, first, inverse = np.unique(np.asarray(labels), return_index=True, return_inverse=True)
        order = np.argsort(np.argsort(first))
        return cls(order[inverse])


@dataclass
class PriorModel:
    """Graph prior specification.

    ``kind`` is one of ``er_simple``, ``er_multi``, ``cm``, ``ucm``, ``sbm``.
    ``degrees`` is the fixed degree sequence of the CM. ``sbm_multigraph``
    switches the SBM graph term from binomials (no multiedges) to multiset
    coefficients.
    """

    kind: str
    edge_count: EdgeCountPrior = field(default_factory=EdgeCountPrior)
    degrees: np.ndarray = None
    sbm_multigraph: bool = False

    def __post_init__(self):
        if self.kind not in PRIOR_KINDS:
            raise ValueError(f"prior kind must be one of {PRIOR_KINDS}, got {self.kind!r}")
        if self.kind == "cm":
            if self.degrees is None:
                raise ValueError("the CM prior needs a degree sequence")
            self.degrees = np.asarray(self.degrees, dtype=np.int64)
            if self.degrees.sum() % 2:
                raise ValueError("degree sequence has an odd sum")
            self.edge_count = EdgeCountPrior("delta", int(self.degrees.sum() // 2))

    @property
    def code(self):
        if self.kind == "sbm":
            return SBM_MULTI if self.sbm_multigraph else SBM
        return {"er_simple": ER_SIMPLE, "er_multi": ER_MULTI, "cm": CM, "ucm": UCM}[self.kind]

    @property
    def graph_mode(self):
        return "simple" if self.kind == "er_simple" else "multi"

    @property
    def has_partition(self):
        return self.kind == "sbm"

    def to_dict(self):
        out = {"kind": self.kind, "edge_count": self.edge_count.to_dict()}
        if self.degrees is not None:
            out["degrees"] = self.degrees.tolist()
        if self.kind == "sbm":
            out["sbm_multigraph"] = self.sbm_multigraph
        return out

    @classmethod
    def from_dict(cls, spec):
        spec = dict(spec)
        kind = spec.pop("kind").lower()
        if kind == "er":
            kind = "er_simple"
        edge_count = EdgeCountPrior.from_dict(spec.pop("edge_count", {"delta": 0}))
        return cls(kind=kind, edge_count=edge_count, **spec)


# --------------------------------------------------------------------------
# Closed-form log-priors
# --------------------------------------------------------------------------


def log_edge_count_prior(e, spec):
    if e < 0:
        return NEG_INF
    if spec.kind == "delta":
        return 0.0 if e == spec.value else NEG_INF
    lam = float(spec.value)
    if lam == 0:
        return 0.0 if e == 0 else NEG_INF
    return e * math.log2(lam) - (e + 1) * math.log2(lam + 1.0)


def log_prior_er(g, e, mode="simple"):
    """Uniform prior over graphs with ``e`` edges (simple or loopy multigraph)."""
    if g.edge_total != e:
        raise ValueError(f"graph has {g.edge_total} edges, prior expects {e}")
    n = g.n_nodes
    if mode == "simple":
        if not g.is_simple():
            return NEG_INF
        return -float(log2_binom(n * (n - 1) // 2, e))
    if mode == "multi":
        return -float(log2_multiset(n * (n + 1) // 2, e))
    raise ValueError(f"unknown mode {mode!r}")


def _log_pairing_weight(g):
    """log2 of prod k_i! / (prod_{i<j} a_ij! prod_i a_ii!!)."""
    a = g.adjacency
    upper = a[np.triu_indices(g.n_nodes, k=1)]
    return float(
        np.sum(log2_factorial(g.degrees))
        - np.sum(log2_factorial(upper))
        - np.sum(log2_even_double_factorial(np.diag(a)))
    )


def log_prior_cm(g, degrees):
    """Stub-matching probability of ``g`` given its degree sequence."""
    degrees = np.asarray(degrees)
    if not np.array_equal(g.degrees, degrees):
        raise ValueError("graph degree sequence differs from the prescribed one")
    return _log_pairing_weight(g) - float(log2_double_factorial_odd(g.edge_total))


def log_prior_ucm(g, degrees, e):
    """CM with a uniform hyperprior over degree sequences summing to ``2e``."""
    degrees = np.asarray(degrees)
    if int(degrees.sum()) != 2 * e:
        raise ValueError(f"degrees sum to {degrees.sum()}, expected {2 * e}")
    return log_prior_cm(g, degrees) - float(log2_multiset(g.n_nodes, 2 * e))


def block_edge_matrix(g, partition):
    """``e_rs = sum_ij a_ij [b_i = r][b_j = s]`` (diagonal = twice internal edges)."""
    z = np.zeros((g.n_nodes, partition.n_blocks), dtype=np.int64)
    z[np.arange(g.n_nodes), partition.assignments] = 1
    return z.T @ g.adjacency @ z


def log_partition_prior(partition, n_nodes):
    """log2 P(b | B) + log2 P(B) for labeled partitions.

    ``P(b | B) = [C(N-1, B-1) N! / prod n_r!]^-1`` spreads the composition
    prior uniformly over label vectors with the same block sizes.
    """
    sizes = partition.sizes
    b = len(sizes)
    log_b = -float(log2_binom(n_nodes - 1, b - 1))
    log_b -= float(log2_factorial(n_nodes) - np.sum(log2_factorial(sizes)))
    return log_b - math.log2(n_nodes)


def log_prior_sbm(g, partition, e_matrix, e, n_blocks, edge_count=None, multigraph=False):
    """Microcanonical SBM: ``P(G|e,b) P(e|b,E) P(E) P(b|B) P(B)``."""
    sizes = partition.sizes
    if len(sizes) != n_blocks:
        raise ValueError(f"partition has {len(sizes)} non-empty blocks, expected {n_blocks}")
    e_matrix = np.asarray(e_matrix)
    if not np.array_equal(e_matrix, block_edge_matrix(g, partition)):
        raise ValueError("edge matrix is inconsistent with graph and partition")
    if g.edge_total != e:
        raise ValueError(f"graph has {g.edge_total} edges, prior expects {e}")
    edge_count = edge_count or EdgeCountPrior("delta", e)
    code = SBM_MULTI if multigraph else SBM
    total = 0.0
    if code == SBM:
        a = g.adjacency
        off = a[np.triu_indices(g.n_nodes, k=1)]
        diag = np.diag(a)
        if np.any(off > 1) or np.any((diag != 0) & (diag != 2)):
            return NEG_INF
    for r in range(n_blocks):
        for s in range(r, n_blocks):
            total += block_term(code, r, s, int(e_matrix[r, s]), int(sizes[r]), int(sizes[s]))
    total -= float(log2_multiset(n_blocks * (n_blocks + 1) // 2, e))
    total += log_edge_count_prior(e, edge_count)
    total += log_partition_prior(partition, g.n_nodes)
    return total


def log_prior(model, g, partition=None):
    """Joint log-prior ``log P(G, theta)`` including the edge-count prior.

    For the SBM this is the labeled-partition joint ``log P(G, b)``.
    """
    e = g.edge_total
    log_e = log_edge_count_prior(e, model.edge_count)
    if log_e == NEG_INF:
        return NEG_INF
    if model.kind == "er_simple":
        return log_prior_er(g, e, "simple") + log_e
    if model.kind == "er_multi":
        return log_prior_er(g, e, "multi") + log_e
    if model.kind == "cm":
        if not np.array_equal(g.degrees, model.degrees):
            return NEG_INF
        return log_prior_cm(g, model.degrees)
    if model.kind == "ucm":
        return log_prior_ucm(g, g.degrees, e) + log_e
    if partition is None:
        raise ValueError("the SBM prior needs a partition")
    return log_prior_sbm(
        g,
        partition,
        block_edge_matrix(g, partition),
        e,
        partition.n_blocks,
        edge_count=model.edge_count,
        multigraph=model.sbm_multigraph,
    )


def global_term(model, n_nodes, e, sizes=None):
    """Part of the log-prior that depends only on (E, B, block sizes)."""
    code = model.code
    out = log_edge_count_prior(e, model.edge_count)
    if code == ER_SIMPLE:
        out -= float(log2_binom(n_nodes * (n_nodes - 1) // 2, e))
    elif code == ER_MULTI:
        out -= float(log2_multiset(n_nodes * (n_nodes + 1) // 2, e))
    elif code in (CM, UCM):
        out -= float(log2_double_factorial_odd(e))
        if code == UCM:
            out -= float(log2_multiset(n_nodes, 2 * e))
    else:
        b = len(sizes)
        out -= float(log2_multiset(b * (b + 1) // 2, e))
        out += log_partition_prior(Partition(np.repeat(np.arange(b), sizes)), n_nodes)
    return out


# --------------------------------------------------------------------------
# Sampling
# --------------------------------------------------------------------------


def _uniform_multiset(rng, n_items, k):
    """Uniform multiset of size k over ``range(n_items)`` (stars and bars)."""
    if k == 0:
        return np.zeros(0, dtype=np.int64)
    bars = np.sort(rng.choice(n_items + k - 1, size=k, replace=False))
    return bars - np.arange(k)


def _uniform_composition(rng, n, parts):
    cuts = np.sort(rng.choice(np.arange(1, n), size=parts - 1, replace=False)) if parts > 1 else []
    bounds = np.concatenate([[0], cuts, [n]]).astype(np.int64)
    return np.diff(bounds)


def _stub_matching(rng, degrees):
    stubs = np.repeat(np.arange(len(degrees)), degrees)
    rng.shuffle(stubs)
    return stubs.reshape(-1, 2)


def sample_prior(model, rng, n_nodes):
    """Exact draw ``(graph, hyper)`` from the prior.

    ``hyper`` holds ``E`` and, where relevant, ``degrees`` or ``partition``.
    """
    e = model.edge_count.sample(rng)
    mode = model.graph_mode
    g = Graph(n_nodes, mode)
    hyper = {"E": e}
    if model.kind == "er_simple":
        pairs = np.array(np.triu_indices(n_nodes, k=1)).T
        if e > len(pairs):
            raise ValueError(f"cannot place {e} edges in a simple graph of {n_nodes} nodes")
        for p in rng.choice(len(pairs), size=e, replace=False):
            g.toggle_edge(int(pairs[p, 0]), int(pairs[p, 1]), +1)
    elif model.kind == "er_multi":
        pairs = np.array(np.triu_indices(n_nodes, k=0)).T
        for p in _uniform_multiset(rng, len(pairs), e):
            g.toggle_edge(int(pairs[p, 0]), int(pairs[p, 1]), +1)
    elif model.kind in ("cm", "ucm"):
        if model.kind == "cm":
            degrees = model.degrees
        else:
            degrees = np.bincount(_uniform_multiset(rng, n_nodes, 2 * e), minlength=n_nodes)
        for i, j in _stub_matching(rng, degrees):
            g.toggle_edge(int(i), int(j), +1)
        hyper["degrees"] = np.asarray(degrees).copy()
    else:
        g, partition = _sample_sbm(model, rng, n_nodes, e)
        hyper["partition"] = partition
    return g, hyper


def _sample_sbm(model, rng, n_nodes, e):
    while True:
        b = int(rng.integers(1, n_nodes + 1))
        sizes = _uniform_composition(rng, n_nodes, b)
        labels = rng.permutation(np.repeat(np.arange(b), sizes))
        partition = Partition(labels)
        block_pairs = [(r, s) for r in range(b) for s in range(r, b)]
        counts = np.bincount(_uniform_multiset(rng, len(block_pairs), e), minlength=len(block_pairs))
        members = [np.flatnonzero(labels == r) for r in range(b)]
        g = Graph(n_nodes, "multi")
        feasible = True
        for (r, s), count in zip(block_pairs, counts):
            if count == 0:
                continue
            if r == s:
                pairs = [(members[r][u], members[r][v]) for u in range(sizes[r]) for v in range(u, sizes[r])]
            else:
                pairs = [(i, j) for i in members[r] for j in members[s]]
            if model.sbm_multigraph:
                chosen = _uniform_multiset(rng, len(pairs), count)
            else:
                if count > len(pairs):
                    feasible = False
                    break
                chosen = rng.choice(len(pairs), size=count, replace=False)
            for p in chosen:
                g.toggle_edge(int(pairs[p][0]), int(pairs[p][1]), +1)
        # binomial variant: infeasible edge matrices carry no graphs, redraw
        if feasible:
            return g, partition


# --------------------------------------------------------------------------
# Exhaustive support enumeration (small N)
# --------------------------------------------------------------------------


def enumerate_graphs(n_nodes, n_edges, mode="simple"):
    """Yield every graph with ``n_edges`` edges (simple or loopy multigraph)."""
    if mode == "simple":
        pairs = list(itertools.combinations(range(n_nodes), 2))
        combos = itertools.combinations(pairs, n_edges)
    else:
        pairs = list(itertools.combinations_with_replacement(range(n_nodes), 2))
        combos = itertools.combinations_with_replacement(pairs, n_edges)
    for combo in combos:
        yield Graph.from_edges(n_nodes, combo, mode=mode)


def enumerate_partitions(n_nodes):
    """Yield every labeled partition with blocks 0..B-1 all non-empty."""
    for labels in itertools.product(range(n_nodes), repeat=n_nodes):
        labels = np.asarray(labels)
        b = labels.max() + 1
        if len(np.unique(labels)) == b:
            yield Partition(labels)


def enumerate_prior_support(model, n_nodes):
    """All graphs with positive prior mass and their marginal log-prior.

    Hyperparameters (degree sequence, partition) are summed out; the edge
    count must be a delta prior.
    """
    if model.edge_count.kind != "delta":
        raise ValueError("enumeration needs a delta edge-count prior")
    e = int(model.edge_count.value)
    partitions = list(enumerate_partitions(n_nodes)) if model.kind == "sbm" else None
    out = []
    for g in enumerate_graphs(n_nodes, e, model.graph_mode):
        if partitions is None:
            lp = log_prior(model, g)
        else:
            lp = logsumexp2([log_prior(model, g, p) for p in partitions])
        if lp != NEG_INF:
            out.append((g, lp))
    return out
