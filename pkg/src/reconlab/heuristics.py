"""Score-matrix baselines: correlation, lag-1 Granger causality and transfer
entropy.

``S[i, j]`` scores the directed influence of ``j`` on ``i``; ``scores`` holds
the undirected version ``max(S, S.T)`` used for AUC.
"""

from dataclasses import dataclass, field

import numpy as np

from ._math import entropy_bits

GRANGER_CAP = 1e6
METHODS = ("corr", "granger", "te")


@dataclass
class ScoreMatrix:
    directed: np.ndarray
    flags: list = field(default_factory=list)
    literal: np.ndarray = None
    symmetric: bool = True

    @property
    def scores(self):
        if not self.symmetric:
            return self.directed
        return symmetrize(self.directed)


def symmetrize(s):
    return np.maximum(s, s.T)


def _as_series(x, min_t):
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] < min_t:
        raise ValueError(f"need an (N, T) series with T >= {min_t}, got shape {x.shape}")
    return x


def correlation_scores(x):
    """Pearson correlation ``C_ij / (sigma_i sigma_j)``; rows with zero
    variance score 0 and are flagged."""
    x = _as_series(x, 2)
    centered = x - x.mean(axis=1, keepdims=True)
    c = centered @ centered.T / (x.shape[1] - 1)
    sigma = np.sqrt(np.diag(c))
    dead = sigma == 0
    denom = np.outer(np.where(dead, 1.0, sigma), np.where(dead, 1.0, sigma))
    s = c / denom
    s[dead, :] = 0.0
    s[:, dead] = 0.0
    np.fill_diagonal(s, 0.0)
    flags = [f"zero_variance:{i}" for i in np.flatnonzero(dead)]
    return ScoreMatrix(s, flags)


def _residual_variance(design, y):
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    r = y - design @ coef
    return float(r @ r / len(y))


def granger_scores(x):
    """Lag-1 Granger score ``Sigma_i / Sigma_ij`` (restricted over full
    residual variance), so larger means stronger evidence. The literal ratio
    ``Sigma_ij / Sigma_i`` is kept in ``literal``. A perfect fit is capped at
    ``GRANGER_CAP``; a constant target scores 1 and is flagged."""
    x = _as_series(x, 3)
    n, t = x.shape
    past, future = x[:, :-1], x[:, 1:]
    ones = np.ones(t - 1)
    s = np.ones((n, n))
    literal = np.ones((n, n))
    flags = []
    for i in range(n):
        y = future[i]
        if np.ptp(y) == 0:
            flags.append(f"constant_series:{i}")
            continue
        sigma_i = _residual_variance(np.column_stack([ones, past[i]]), y)
        for j in range(n):
            if j == i:
                continue
            sigma_ij = _residual_variance(np.column_stack([ones, past[i], past[j]]), y)
            literal[i, j] = sigma_ij / sigma_i if sigma_i > 0 else 1.0
            if sigma_i <= 1e-15:
                s[i, j] = 1.0
            elif sigma_ij <= sigma_i / GRANGER_CAP:
                s[i, j] = GRANGER_CAP
            else:
                s[i, j] = sigma_i / sigma_ij
    np.fill_diagonal(s, 0.0)
    np.fill_diagonal(literal, 0.0)
    return ScoreMatrix(s, flags, literal=literal)


def transfer_entropy_scores(x):
    """Plug-in ``T_{j -> i} = H(X_i' | X_i) - H(X_i' | X_i, X_j)`` in bits."""
    x = _as_series(x, 3).astype(np.int64)
    n = x.shape[0]
    nxt, cur = x[:, 1:], x[:, :-1]
    s = np.zeros((n, n))
    for i in range(n):
        pair = 2 * nxt[i] + cur[i]
        p_pair = np.bincount(pair, minlength=4) / len(pair)
        h_cond_i = entropy_bits(p_pair) - entropy_bits(np.bincount(cur[i], minlength=2) / len(pair))
        codes = 4 * nxt[i][None, :] + 2 * cur[i][None, :] + cur
        for j in range(n):
            if j == i:
                continue
            p3 = np.bincount(codes[j], minlength=8) / codes.shape[1]
            p_cond = np.bincount(2 * cur[i] + cur[j], minlength=4) / codes.shape[1]
            h_cond_ij = entropy_bits(p3) - entropy_bits(p_cond)
            s[i, j] = max(h_cond_i - h_cond_ij, 0.0)
    return ScoreMatrix(s)


def heuristic_scores(x, method):
    if method == "corr":
        return correlation_scores(x)
    if method == "granger":
        return granger_scores(x)
    if method == "te":
        return transfer_entropy_scores(x)
    raise ValueError(f"unknown heuristic {method!r}; choose from {METHODS}")
