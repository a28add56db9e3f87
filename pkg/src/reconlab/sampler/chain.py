"""Gibbs sweeps over (G, theta, phi) and posterior chains."""

from dataclasses import asdict, dataclass, replace

import numpy as np

from ..priors import CM, EdgeCountPrior, Partition, sample_prior
from . import _kernel
from .moves import graph_step, param_step, partition_step
from .state import ChainState


@dataclass
class SamplerConfig:
    """Chain settings.

    ``sweep_size`` is the number of graph proposals per sweep (``None`` means
    ``N(N-1)/2``); burn-in and thinning are counted in sweeps.
    """

    burn_in: int = 2000
    thinning: int = 10
    samples: int = 100
    seed: int = 0
    sigma_phi: float = 0.1
    sweep_size: int = None
    swap_prob: float = 0.5
    schedule: tuple = ("G", "theta", "phi")
    partition_moves: int = None
    use_kernel: bool = True
    candidates_g: int = 10000
    candidates_theta: int = 10000
    candidates_phi: int = 10
    patience: int = 5
    max_iterations: int = 200

    def to_dict(self):
        out = asdict(self)
        out["schedule"] = list(self.schedule)
        return out

    @classmethod
    def from_dict(cls, spec):
        spec = dict(spec or {})
        greedy = spec.pop("semi_greedy", {}) or {}
        if "sweeps" in spec:
            spec.setdefault("samples", spec.pop("sweeps"))
        spec.pop("chains", None)
        for key in ("candidates_g", "candidates_phi", "patience"):
            if key in greedy:
                spec[key] = greedy[key]
        if "schedule" in spec:
            spec["schedule"] = tuple(spec["schedule"])
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(spec) - known
        if unknown:
            raise ValueError(f"unknown sampler settings {sorted(unknown)}")
        return cls(**spec)


def effective_swap_prob(state, swap_prob):
    # hinge flips change degrees, which the fixed-degree CM always rejects
    return 1.0 if state.prior.code == CM else swap_prob


def graph_sweep(state, n_moves, swap_prob=0.5, use_kernel=True):
    """``n_moves`` MH graph proposals; returns the number accepted."""
    if state.graph.edge_total == 0 or n_moves <= 0:
        return 0
    swap_prob = effective_swap_prob(state, swap_prob)
    uniforms = state.rng.random((n_moves, 5))
    if not use_kernel:
        accepted = 0
        for u in uniforms:
            accepted += graph_step(state, u, swap_prob)[1]
        return accepted
    stats = np.zeros(4, dtype=np.int64)
    key = (state.dynamics.code, state.params.tobytes())
    if getattr(state, "_table_key", None) != key:
        state._table = _kernel.transition_table(state.dynamics.code, state.params, _kernel.TABLE_CAP)
        state._table_key = key
    tab = state._table
    d_prior = _kernel.graph_sweep(
        uniforms,
        state.graph.adjacency,
        state.graph.degrees,
        state.edges,
        state.x,
        state.activity.m,
        state.node_ll,
        state.node_bad,
        state.dynamics.code,
        state.params,
        tab,
        state.prior.code,
        state.k_fixed,
        state.blocks,
        state.sizes,
        state.ers,
        swap_prob,
        stats,
        _kernel.INFEASIBLE_PENALTY,
    )
    state.activity.n = state.graph.degrees[:, None] - state.activity.m
    state.log_prior += d_prior
    for k, name in enumerate(("double_edge_swap", "hinge_flip")):
        state.stats[name][0] += int(stats[2 * k])
        state.stats[name][1] += int(stats[2 * k + 1])
    return int(stats[1] + stats[3])


def gibbs_sweep(state, schedule=("G", "theta", "phi"), config=None):
    """One round of conditional MH updates over the listed blocks."""
    config = config or SamplerConfig()
    n = state.n_nodes
    for block in schedule:
        if block == "G":
            size = config.sweep_size if config.sweep_size is not None else n * (n - 1) // 2
            graph_sweep(state, max(size, 1), config.swap_prob, config.use_kernel)
        elif block == "theta":
            if state.prior.has_partition:
                moves = config.partition_moves if config.partition_moves is not None else n
                for _ in range(moves):
                    partition_step(state)
        elif block == "phi":
            for name in state.dynamics.free:
                param_step(state, name, config.sigma_phi)
        else:
            raise ValueError(f"unknown schedule block {block!r}")
    return state


def initial_state(x, prior, dynamics, rng, graph=None, partition=None):
    """Chain state started from a prior draw (or from ``graph``)."""
    if prior.edge_count.kind != "delta":
        raise ValueError("MCMC runs at fixed E; freeze the edge count first (semi_greedy_search)")
    n = x.shape[0]
    if graph is None:
        graph, hyper = sample_prior(prior, rng, n)
        partition = partition if partition is not None else hyper.get("partition")
    elif prior.has_partition and partition is None:
        partition = Partition(np.zeros(n, dtype=np.int64))
    return ChainState(x, prior, dynamics, graph, partition=partition, rng=rng)


def freeze_edge_count(prior, n_edges):
    return replace(prior, edge_count=EdgeCountPrior("delta", int(n_edges)))


def run_chain(x, prior, dynamics, config=None, state=None, rng=None):
    """Posterior samples of ``(G, theta, phi)``.

    With a geometric edge-count prior the edge count is first fixed by
    :func:`~reconlab.sampler.search.semi_greedy_search`.
    """
    config = config or SamplerConfig()
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    x = np.ascontiguousarray(x, dtype=np.uint8)
    if state is None:
        if prior.edge_count.kind != "delta":
            from .search import semi_greedy_search

            result = semi_greedy_search(x, prior, dynamics, config, rng=rng)
            state = result.state
            state.prior = freeze_edge_count(prior, result.n_edges)
            state.refresh()
        else:
            state = initial_state(x, prior, dynamics, rng)
    for _ in range(config.burn_in):
        gibbs_sweep(state, config.schedule, config)
    samples = []
    for _ in range(config.samples):
        for _ in range(max(config.thinning, 1)):
            gibbs_sweep(state, config.schedule, config)
        samples.append(state.snapshot())
    return samples


def run_chains(x, prior, dynamics, config=None, n_chains=1, threads=1):
    """Independent chains seeded by spawning ``config.seed``; compiled
    sweeps release the GIL so threads run in parallel."""
    config = config or SamplerConfig()
    seeds = np.random.SeedSequence(config.seed).spawn(n_chains)

    def one(seed):
        return run_chain(x, prior, dynamics, config, rng=np.random.default_rng(seed))

    if threads <= 1 or n_chains == 1:
        return [one(s) for s in seeds]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, seeds))
