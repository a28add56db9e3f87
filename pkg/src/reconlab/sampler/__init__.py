"""Posterior sampling of graphs, SBM partitions and dynamics parameters."""

from .chain import SamplerConfig, gibbs_sweep, graph_sweep, initial_state, run_chain, run_chains
from .moves import MoveProposal, graph_step, mh_accept_log_prob, param_step, partition_step, propose_graph_move
from .search import SearchResult, semi_greedy_search
from .state import ChainState, PosteriorSample, delta_log_likelihood, delta_log_prior

__all__ = [
    "ChainState",
    "MoveProposal",
    "PosteriorSample",
    "SamplerConfig",
    "SearchResult",
    "delta_log_likelihood",
    "delta_log_prior",
    "gibbs_sweep",
    "graph_step",
    "graph_sweep",
    "initial_state",
    "mh_accept_log_prob",
    "param_step",
    "partition_step",
    "propose_graph_move",
    "run_chain",
    "run_chains",
    "semi_greedy_search",
]
