"""Bayesian network reconstruction from binary time series, with
information-theoretic measures of how well a graph can be recovered."""

from .dynamics import DynamicsModel, log_likelihood, read_time_series, simulate, write_time_series
from .graph import Graph, read_edge_list, write_edge_list
from .priors import EdgeCountPrior, Partition, PriorModel, log_prior, sample_prior

__version__ = "0.1.0"

__all__ = [
    "DynamicsModel",
    "EdgeCountPrior",
    "Graph",
    "Partition",
    "PriorModel",
    "log_likelihood",
    "log_prior",
    "read_edge_list",
    "read_time_series",
    "sample_prior",
    "simulate",
    "write_edge_list",
    "write_time_series",
]
