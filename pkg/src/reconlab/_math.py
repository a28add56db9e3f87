"""Log-space combinatorics and entropy helpers.

Every logarithm in the package is base 2; ``NEG_INF`` is the sentinel
returned for impossible configurations.
"""

import math

import numpy as np
from scipy.special import gammaln

LN2 = math.log(2.0)
NEG_INF = -math.inf


def log2_factorial(n):
    return gammaln(np.asarray(n, dtype=float) + 1.0) / LN2


def log2_binom(n, k):
    """log2 C(n, k); ``-inf`` outside 0 <= k <= n."""
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    valid = (k >= 0) & (k <= n)
    with np.errstate(invalid="ignore"):
        out = (gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)) / LN2
    out = np.where(valid, out, -np.inf)
    return out[()] if out.ndim == 0 else out


def log2_multiset(n, k):
    """log2 of the multiset coefficient ((n, k)) = C(n + k - 1, k), n >= 1."""
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    return log2_binom(n + k - 1, k)


def log2_double_factorial_odd(e):
    """log2 (2e - 1)!!, the number of perfect matchings of 2e stubs."""
    e = np.asarray(e, dtype=float)
    # (2e - 1)!! = (2e)! / (2^e e!)
    return (gammaln(2.0 * e + 1.0) - gammaln(e + 1.0)) / LN2 - e


def log2_even_double_factorial(a):
    """log2 a!! for even a (a!! = 2^(a/2) (a/2)!), the self-loop weight."""
    half = np.asarray(a, dtype=float) / 2.0
    return half + gammaln(half + 1.0) / LN2


def binary_entropy(p):
    """h(p) in bits with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float)
    q = 1.0 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
        out -= np.where(q > 0, q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
    return out[()] if out.ndim == 0 else out


def entropy_bits(probs, axis=-1):
    """Shannon entropy of (possibly unnormalized-free) probability vectors."""
    probs = np.asarray(probs, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(probs > 0, -probs * np.log2(np.where(probs > 0, probs, 1.0)), 0.0)
    return terms.sum(axis=axis)


def logsumexp2(values):
    """log2 sum 2**values, robust to -inf entries."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return NEG_INF
    top = np.max(values)
    if not np.isfinite(top):
        return float(top)
    return float(top + np.log2(np.sum(np.exp2(values - top))))


def is_neg_inf(value):
    return value == NEG_INF
