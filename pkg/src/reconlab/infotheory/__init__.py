"""Entropies, mutual information, evidence and reconstructability."""

from .enumeration import (
    DynamicsChannel,
    delta_prior_reconstructability,
    enumerate_evidence,
    enumerate_mutual_information,
    enumerate_posterior,
    exact_mutual_information,
    exact_mutual_information_model,
    graph_support,
    posterior_entropy,
)
from .estimators import (
    EdgeMarginals,
    EvidenceEstimate,
    InfoReport,
    align_partitions,
    enumeration_info_report,
    estimate_log_evidence,
    info_report,
    on_support,
    information_gain,
    kde_param_entropy,
    mf_mutual_information,
    mf_posterior_log_prob,
    reconstruction_index,
    sbm_partition_entropy,
)

__all__ = [
    "DynamicsChannel",
    "EdgeMarginals",
    "EvidenceEstimate",
    "InfoReport",
    "align_partitions",
    "delta_prior_reconstructability",
    "enumerate_evidence",
    "enumerate_mutual_information",
    "enumerate_posterior",
    "enumeration_info_report",
    "estimate_log_evidence",
    "exact_mutual_information",
    "exact_mutual_information_model",
    "graph_support",
    "info_report",
    "on_support",
    "information_gain",
    "kde_param_entropy",
    "mf_mutual_information",
    "mf_posterior_log_prob",
    "posterior_entropy",
    "reconstruction_index",
    "sbm_partition_entropy",
]
