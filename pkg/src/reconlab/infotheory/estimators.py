"""Sample-based estimators: mean-field edge marginals, evidence, information
gain, reconstruction index, KDE and partition entropies.

Every entropy is in bits.
"""

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.stats import gaussian_kde

from .._math import NEG_INF, entropy_bits


# --------------------------------------------------------------------------
# Edge marginals and the mean-field posterior
# --------------------------------------------------------------------------


def _adjacency_of(g):
    if isinstance(g, np.ndarray):
        return g
    a = g.adjacency
    return a() if callable(a) else a


def multiplicity_matrix(adjacency):
    """Edge multiplicities with loops counted once (``a_ii / 2``)."""
    m = np.asarray(adjacency, dtype=np.int64).copy()
    np.fill_diagonal(m, np.diag(m) // 2)
    return m


@dataclass
class EdgeMarginals:
    """``probs[i, j, m] = P(a_ij = m | x)``, symmetric in (i, j); loops are
    indexed by their multiplicity."""

    probs: np.ndarray
    n_samples: int = 0

    @classmethod
    def from_samples(cls, samples, pseudo_count=0.0):
        """Plug-in frequencies over posterior samples (``PosteriorSample`` or
        adjacency matrices). ``pseudo_count`` adds that many virtual
        observations of every multiplicity value."""
        mats = [multiplicity_matrix(_adjacency_of(s)) for s in samples]
        if not mats:
            raise ValueError("no posterior samples")
        stack = np.stack(mats)
        top = max(int(stack.max()), 1)
        counts = np.stack([(stack == m).sum(axis=0) for m in range(top + 1)], axis=-1).astype(float)
        counts += pseudo_count
        probs = counts / counts.sum(axis=-1, keepdims=True)
        return cls(probs=probs, n_samples=len(mats))

    @classmethod
    def from_edge_probabilities(cls, pi):
        """Simple-graph marginals from a matrix of edge probabilities."""
        pi = np.asarray(pi, dtype=float)
        pi = np.triu(pi, 1) + np.triu(pi, 1).T
        return cls(probs=np.stack([1.0 - pi, pi], axis=-1), n_samples=0)

    @property
    def n_nodes(self):
        return self.probs.shape[0]

    @property
    def edge_probability(self):
        """``pi_ij`` = probability of at least one edge (the simple-graph
        marginal); diagonal zeroed."""
        p = 1.0 - self.probs[..., 0]
        np.fill_diagonal(p, 0.0)
        return p

    @property
    def mean_multiplicity(self):
        return np.tensordot(self.probs, np.arange(self.probs.shape[-1]), axes=([2], [0]))

    def entropy(self):
        """``H_MF(G | x) = sum_{i <= j} H(pi_ij)``."""
        iu = np.triu_indices(self.n_nodes)
        return float(entropy_bits(self.probs[iu], axis=-1).sum())


def mf_posterior_log_prob(g, marginals):
    """``log2 P_MF(g | x) = sum_{i <= j} log2 pi_ij(a_ij | x)``; ``-inf`` if
    some observed multiplicity has zero marginal."""
    mult = multiplicity_matrix(_adjacency_of(g))
    if mult.shape[0] != marginals.n_nodes:
        raise ValueError("graph and marginals disagree on the number of nodes")
    iu = np.triu_indices(marginals.n_nodes)
    values = mult[iu]
    top = marginals.probs.shape[-1] - 1
    if np.any(values > top):
        return NEG_INF
    p = marginals.probs[iu[0], iu[1], values]
    if np.any(p <= 0):
        return NEG_INF
    return float(np.sum(np.log2(p)))


def mf_mutual_information(datasets, pseudo_count=0.0):
    """MC lower-bound-style estimate of ``I(G; X)``.

    ``datasets`` holds ``(true_graph, posterior_samples, log_prior_true)``
    triples from joint draws of the model. Returns ``(mean, standard error)``.
    """
    values = []
    for g, samples, log_prior_true in datasets:
        marg = EdgeMarginals.from_samples(samples, pseudo_count)
        values.append(mf_posterior_log_prob(g, marg) - log_prior_true)
    if len(values) < 1:
        raise ValueError("need at least one dataset")
    values = np.array(values)
    se = float(values.std(ddof=1) / math.sqrt(len(values))) if len(values) > 1 else math.nan
    return float(values.mean()), se


# --------------------------------------------------------------------------
# Parameter and partition entropies
# --------------------------------------------------------------------------


def kde_param_entropy(samples):
    """Differential entropy (bits) of a Gaussian KDE with Silverman's
    bandwidth, by resubstitution: ``-mean log2 f_hat(x_i)``. Zero-variance
    input gives ``-inf``."""
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size < 10:
        raise ValueError(f"KDE entropy needs at least 10 samples, got {samples.size}")
    if np.ptp(samples) == 0:
        return NEG_INF
    kde = gaussian_kde(samples, bw_method="silverman")
    return float(-np.mean(np.log2(kde(samples))))


def align_partitions(partitions):
    """Relabel each partition by greedy maximum overlap with the running
    modal partition; returns the aligned ``(K, N)`` label array."""
    partitions = [np.asarray(p, dtype=np.int64) for p in partitions]
    n = len(partitions[0])
    counts = np.zeros((n, n), dtype=np.int64)
    aligned = []
    for labels in partitions:
        if counts.sum() == 0:
            mapped = labels.copy()
        else:
            ref = counts.argmax(axis=1)
            b = int(labels.max()) + 1
            overlap = np.zeros((b, n), dtype=np.int64)
            np.add.at(overlap, (labels, ref), 1)
            mapping = -np.ones(b, dtype=np.int64)
            used = set()
            order = np.dstack(np.unravel_index(np.argsort(-overlap, axis=None, kind="stable"), overlap.shape))[0]
            for r, s in order:
                if overlap[r, s] == 0:
                    break
                if mapping[r] < 0 and s not in used:
                    mapping[r] = s
                    used.add(int(s))
            free = (s for s in range(n) if s not in used)
            for r in range(b):
                if mapping[r] < 0:
                    mapping[r] = next(free)
            mapped = mapping[labels]
        counts[np.arange(n), mapped] += 1
        aligned.append(mapped)
    return np.array(aligned)


def sbm_partition_entropy(partitions, relabel=True):
    """Mean-field partition entropy ``-sum_i sum_r pi_ir log2 pi_ir`` from
    node-membership frequencies."""
    labels = align_partitions(partitions) if relabel else np.asarray(partitions, dtype=np.int64)
    k, n = labels.shape
    width = max(int(labels.max()) + 1, 1)
    freq = np.zeros((n, width))
    np.add.at(freq, (np.tile(np.arange(n), k), labels.ravel()), 1.0)
    freq /= k
    return float(entropy_bits(freq, axis=1).sum())


# --------------------------------------------------------------------------
# Evidence, information gain, reconstruction index
# --------------------------------------------------------------------------


@dataclass
class EvidenceEstimate:
    value: float
    se: float
    mean_log_joint: float
    graph_entropy: float
    param_entropy: float = 0.0
    partition_entropy: float = 0.0
    flags: list = field(default_factory=list)


def estimate_log_evidence(samples, marginals=None, pseudo_count=0.0):
    """``mean log P(x, phi, G, theta) + H_MF(G|x) + H_KDE(phi|x) + H_MF(b|G)``.

    Log-joint values come from the samples themselves, so whatever prior
    terms the chain used are what the estimate refers to.
    """
    if not samples:
        raise ValueError("no posterior samples")
    marginals = marginals or EdgeMarginals.from_samples(samples, pseudo_count)
    joint = np.array([s.log_joint for s in samples])
    flags = []
    if np.any(~np.isfinite(joint)):
        flags.append("non_finite_log_joint")
    mean = float(joint.mean())
    finite = len(joint) > 1 and not flags
    se = float(joint.std(ddof=1) / math.sqrt(len(joint))) if finite else math.nan
    h_g = marginals.entropy()
    h_phi = 0.0
    names = sorted(samples[0].phi)
    for name in names:
        values = np.array([s.phi[name] for s in samples])
        h = kde_param_entropy(values)
        if h == NEG_INF:
            flags.append(f"degenerate_kde:{name}")
            h = 0.0
        h_phi += h
    h_b = 0.0
    if samples[0].partition is not None:
        h_b = sbm_partition_entropy([s.partition for s in samples])
    return EvidenceEstimate(mean + h_g + h_phi + h_b, se, mean, h_g, h_phi, h_b, flags)


def information_gain(samples, evidence=None):
    """``(I_hat, Lambda_hat, flags)``.

    ``I_hat`` is the mean posterior log-likelihood minus the log-evidence
    estimate; ``Lambda_hat = -mean log P(G)``, with the partition entropy
    added back for the SBM. ``I_hat`` is clamped to ``[0, Lambda_hat]`` and flagged.

    The gain is about G alone, so when phi is sampled the likelihood is
    ``log P(x|G)`` with phi marginalized: ``log P(x|G, phi) + log p(phi) +
    H(phi|x)``. Otherwise the information about phi would be counted too.
    """
    evidence = evidence or estimate_log_evidence(samples)
    mean_ll = float(np.mean([s.log_likelihood + s.log_param_density for s in samples]))
    mean_ll += evidence.param_entropy
    gain = mean_ll - evidence.value
    lam = -float(np.mean([s.log_prior for s in samples])) - evidence.partition_entropy
    flags = list(evidence.flags)
    if gain < 0:
        flags.append(f"information_gain_clamped_from:{gain:.6g}")
        gain = 0.0
    elif gain > lam:
        # lam - H_MF(G|x) loses a few ulps to cancellation
        if gain - lam > PSI_TOL * max(1.0, abs(lam)):
            flags.append(f"information_gain_clamped_from:{gain:.6g}")
        gain = lam
    return gain, lam, flags


PSI_TOL = 1e-12


def reconstruction_index(gain, lam):
    """``(psi, flag)`` with ``psi = gain / lam`` clamped to [0, 1].
    ``lam <= 0`` leaves psi undefined (NaN)."""
    if not lam > 0:
        return math.nan, "undefined_lambda_zero"
    psi = gain / lam
    # round-off past the bounds is clamped silently
    if psi < 0:
        return 0.0, f"psi_clamped_from:{psi:.6g}" if psi < -PSI_TOL else None
    if psi > 1:
        return 1.0, f"psi_clamped_from:{psi:.6g}" if psi > 1 + PSI_TOL else None
    return psi, None


@dataclass
class InfoReport:
    log_evidence: float
    information_gain: float
    lambda_: float
    reconstruction_index: float
    posterior_entropy: float
    estimator: str = "mean-field"
    n_samples: int = 0
    log_evidence_se: float = math.nan
    flags: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        out = asdict(self)
        out["lambda"] = out.pop("lambda_")
        return out

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), default=_json_default, **kwargs)


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj)}")


def on_support(samples):
    """Samples with a finite log-joint. The rest have zero posterior mass: the
    chain had not yet reached a graph that can produce the data."""
    return [s for s in samples if math.isfinite(s.log_joint)]


def info_report(samples, pseudo_count=0.0):
    """Mean-field :class:`InfoReport` from posterior samples of one dataset.

    Samples off the support are dropped and counted in the flags; with none
    left every estimate is undefined (NaN).
    """
    kept = on_support(samples)
    dropped = len(samples) - len(kept)
    if not kept:
        return InfoReport(
            log_evidence=math.nan,
            information_gain=math.nan,
            lambda_=math.nan,
            reconstruction_index=math.nan,
            posterior_entropy=math.nan,
            estimator="mean-field",
            n_samples=0,
            log_evidence_se=math.nan,
            flags=[f"off_support_samples_dropped:{dropped}", "no_samples_on_support"],
        )
    samples = kept
    marg = EdgeMarginals.from_samples(samples, pseudo_count)
    ev = estimate_log_evidence(samples, marg)
    gain, lam, flags = information_gain(samples, ev)
    if dropped:
        flags.insert(0, f"off_support_samples_dropped:{dropped}")
    psi, flag = reconstruction_index(gain, lam)
    if flag:
        flags.append(flag)
    return InfoReport(
        log_evidence=ev.value,
        information_gain=gain,
        lambda_=lam,
        reconstruction_index=psi,
        posterior_entropy=ev.graph_entropy,
        estimator="mean-field",
        n_samples=len(samples),
        log_evidence_se=ev.se,
        flags=flags,
        extra={
            "mean_log_joint": ev.mean_log_joint,
            "param_entropy": ev.param_entropy,
            "partition_entropy": ev.partition_entropy,
        },
    )


def enumeration_info_report(x, prior, dynamics):
    """Exact :class:`InfoReport` by graph enumeration (fixed dynamics)."""
    from .enumeration import enumerate_evidence, enumerate_posterior, graph_support

    support = graph_support(prior, np.asarray(x).shape[0])
    post = enumerate_posterior(x, prior, dynamics, support)
    p = np.exp2([lp for _, lp in post])
    log_prior_values = np.array([lp for _, lp in support])
    log_post = np.array([lp for _, lp in post])
    live = p > 0
    lam = float(-np.sum(p[live] * log_prior_values[live]))
    gain = float(np.sum(p[live] * (log_post[live] - log_prior_values[live])))
    h = float(-np.sum(p[live] * log_post[live]))
    psi, flag = reconstruction_index(gain, lam)
    return InfoReport(
        log_evidence=enumerate_evidence(x, prior, dynamics, support),
        information_gain=gain,
        lambda_=lam,
        reconstruction_index=psi,
        posterior_entropy=h,
        estimator="enumeration",
        n_samples=len(support),
        flags=[flag] if flag else [],
    )
