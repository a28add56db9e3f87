"""Reconstruction performance against a known true graph."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from ._math import binary_entropy

LOSS_CLIP = 1e-12


@dataclass
class ScoredPrediction:
    """True simple adjacency plus predicted edge marginals or scores."""

    truth: np.ndarray
    scores: np.ndarray
    samples: list = None

    def __post_init__(self):
        self.truth = np.asarray(self.truth)
        self.scores = np.asarray(self.scores, dtype=float)
        if self.truth.shape != self.scores.shape:
            raise ValueError(f"shape mismatch: {self.truth.shape} vs {self.scores.shape}")


def _upper(mat):
    mat = np.asarray(mat)
    return mat[np.triu_indices(mat.shape[0], k=1)]


def _binary_truth(a_true):
    a = _upper(a_true)
    if np.any(a > 1):
        raise ValueError("metrics expect a simple-graph adjacency")
    return a.astype(float)


def posterior_loss(a_true, pi, clip=LOSS_CLIP):
    """Log loss ``-sum_{i<j} [a log2 pi + (1 - a) log2 (1 - pi)]`` in bits.

    The probability given to the true value is floored at ``clip``; with
    ``clip=0`` a confidently wrong marginal gives ``inf``.
    """
    a = _binary_truth(a_true)
    p = _upper(pi).astype(float)
    if np.any((p < 0) | (p > 1)):
        raise ValueError("marginals must lie in [0, 1]")
    # probability given to the true value; only that side is clipped, so a
    # perfect prediction scores exactly 0
    q = np.maximum(np.where(a == 1, p, 1.0 - p), clip)
    with np.errstate(divide="ignore"):
        return float(-np.log2(q).sum())


def loss_is_infinite(a_true, pi):
    """True when some marginal is exactly 0 or 1 against the truth."""
    return math.isinf(posterior_loss(a_true, pi, clip=0.0))


def mean_error(a_true, pi):
    """``binom(N, 2)^-1 sum_{i<j} |a_ij - pi_ij|``."""
    return float(np.mean(np.abs(_binary_truth(a_true) - _upper(pi))))


def auc(a_true, scores):
    """Mann-Whitney AUC over node pairs, ties counted one half. NaN when the
    truth has no positive or no negative pair."""
    a = _binary_truth(a_true)
    s = _upper(scores).astype(float)
    n_pos = int(a.sum())
    n_neg = len(a) - n_pos
    if n_pos == 0 or n_neg == 0:
        return math.nan
    ranks = rankdata(s)
    return float((ranks[a == 1].sum() - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg))


def jaccard_similarity(a_true, graphs):
    """Posterior mean of ``|E* & E| / |E* | E|`` over sampled graphs (two
    empty edge sets count as 1)."""
    truth = _binary_truth(a_true) > 0
    values = []
    for g in graphs:
        adj = g if isinstance(g, np.ndarray) else (g.adjacency() if callable(g.adjacency) else g.adjacency)
        est = _upper(adj) > 0
        union = np.sum(truth | est)
        values.append(1.0 if union == 0 else np.sum(truth & est) / union)
    return float(np.mean(values))


def fano_error_bound(mi, h_g):
    """Fano lower bound on the error probability, ``max(0, 1 - (I + 1) / H)``."""
    if not h_g > 0:
        raise ValueError("graph entropy must be positive")
    return max(0.0, 1.0 - (mi + 1.0) / h_g)


def fano_inequality_holds(h_cond, p_error, h_g, tol=1e-12):
    """Check ``H(G*|G_hat) <= h(p_e) + p_e H(G*)``."""
    return h_cond <= float(binary_entropy(p_error)) + p_error * h_g + tol


def reconstructability_from_loss(expected_loss, h_g):
    """``1 - loss / H(G)``."""
    if not h_g > 0:
        raise ValueError("graph entropy must be positive")
    return 1.0 - expected_loss / h_g
