import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from reconlab import metrics
from reconlab._math import binary_entropy
from reconlab.graph import Graph
from reconlab.single_edge import SingleEdgeModel, edge_posterior, edge_posterior_entropy, edge_reconstructability


def sym(upper_values, n):
    a = np.zeros((n, n))
    a[np.triu_indices(n, 1)] = upper_values
    return a + a.T


def random_truth(rng, n):
    while True:
        a = sym(rng.integers(0, 2, n * (n - 1) // 2), n).astype(int)
        u = a[np.triu_indices(n, 1)]
        if 0 < u.sum() < len(u):
            return a


class TestLoss:
    def test_perfect(self):
        a = sym([1, 0, 1, 0, 0, 1], 4)
        assert metrics.posterior_loss(a, a) == 0.0
        assert metrics.mean_error(a, a) == 0.0

    def test_half(self):
        a = sym([1, 0, 1, 0, 0, 1], 4)
        half = np.full((4, 4), 0.5)
        assert metrics.posterior_loss(a, half) == pytest.approx(6.0)
        assert metrics.mean_error(a, half) == 0.5

    def test_product_posterior_identity(self):
        rng = np.random.default_rng(0)
        n = 5
        a = random_truth(rng, n)
        pi = sym(rng.uniform(0.01, 0.99, n * (n - 1) // 2), n)
        iu = np.triu_indices(n, 1)
        prob = np.prod(np.where(a[iu] == 1, pi[iu], 1 - pi[iu]))
        assert metrics.posterior_loss(a, pi) == pytest.approx(-math.log2(prob), rel=1e-12)

    def test_confident_error(self):
        a = sym([1, 0, 0], 3)
        pi = sym([0.0, 0.5, 0.5], 3)
        assert metrics.loss_is_infinite(a, pi)
        assert metrics.posterior_loss(a, pi) == pytest.approx(-math.log2(1e-12) + 2, rel=1e-9)
        assert not metrics.loss_is_infinite(a, np.full((3, 3), 0.5))

    def test_mean_error_direct(self):
        rng = np.random.default_rng(1)
        n = 6
        a = random_truth(rng, n)
        pi = sym(rng.random(15), n)
        direct = sum(abs(a[i, j] - pi[i, j]) for i in range(n) for j in range(i + 1, n)) / math.comb(n, 2)
        assert metrics.mean_error(a, pi) == pytest.approx(direct)

    def test_rejects_multigraph_and_bad_marginals(self):
        with pytest.raises(ValueError):
            metrics.posterior_loss(sym([2, 0, 0], 3), np.full((3, 3), 0.5))
        with pytest.raises(ValueError):
            metrics.posterior_loss(sym([1, 0, 0], 3), sym([1.5, 0, 0], 3))

    @given(st.integers(0, 2**32 - 1))
    def test_loss_nonnegative_zero_only_at_truth(self, seed):
        rng = np.random.default_rng(seed)
        a = random_truth(rng, 4)
        pi = sym(rng.random(6), 4)
        loss = metrics.posterior_loss(a, pi)
        assert loss > 0
        assert metrics.posterior_loss(a, a.astype(float)) == pytest.approx(0.0, abs=1e-9)


def brute_auc(a, s):
    iu = np.triu_indices(a.shape[0], 1)
    truth, scores = a[iu], s[iu]
    pos, neg = scores[truth == 1], scores[truth == 0]
    total = sum(1.0 if p > q else 0.5 if p == q else 0.0 for p in pos for q in neg)
    return total / (len(pos) * len(neg))


class TestAUC:
    def test_examples(self):
        a = sym([1, 0, 1, 0, 0, 1], 4)
        assert metrics.auc(a, a) == 1.0
        assert metrics.auc(a, np.ones((4, 4))) == 0.5
        assert metrics.auc(a, 1 - a) == 0.0

    def test_undefined(self):
        assert math.isnan(metrics.auc(np.zeros((3, 3)), np.ones((3, 3))))
        assert math.isnan(metrics.auc(1 - np.eye(3), np.ones((3, 3))))

    @given(st.integers(0, 2**32 - 1), st.integers(3, 8))
    def test_matches_pair_counting(self, seed, n):
        rng = np.random.default_rng(seed)
        a = random_truth(rng, n)
        s = sym(rng.integers(0, 4, n * (n - 1) // 2).astype(float), n)
        assert metrics.auc(a, s) == pytest.approx(brute_auc(a, s))

    @given(st.integers(0, 2**32 - 1))
    def test_monotone_transform_invariance(self, seed):
        rng = np.random.default_rng(seed)
        a = random_truth(rng, 6)
        s = sym(rng.normal(size=15), 6)
        assert metrics.auc(a, s) == pytest.approx(metrics.auc(a, np.exp(3 * s) - 7))


class TestJaccard:
    def test_examples(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        a = g.adjacency
        assert metrics.jaccard_similarity(a, [g, g]) == 1.0
        assert metrics.jaccard_similarity(a, [Graph.from_edges(4, [(0, 2), (1, 3)])]) == 0.0
        assert metrics.jaccard_similarity(np.zeros((3, 3)), [np.zeros((3, 3))]) == 1.0

    def test_two_sample_average(self):
        a = Graph.from_edges(4, [(0, 1), (2, 3)]).adjacency
        s1 = Graph.from_edges(4, [(0, 1)])  # 1/2
        s2 = Graph.from_edges(4, [(0, 1), (2, 3), (1, 2)])  # 2/3
        assert metrics.jaccard_similarity(a, [s1, s2]) == pytest.approx((1 / 2 + 2 / 3) / 2)


def single_edge_joint(model):
    """P(a, n) as a (2, T+1) array plus the MAP decision per n."""
    from scipy.stats import binom

    n = np.arange(model.T + 1)
    joint = np.vstack([(1 - model.p) * binom.pmf(n, model.T, model.r), model.p * binom.pmf(n, model.T, model.q)])
    return joint, joint.argmax(axis=0)


class TestFano:
    def test_examples(self):
        assert metrics.fano_error_bound(10.0, 10.0) == 0.0
        assert metrics.fano_error_bound(0.0, 10.0) == pytest.approx(0.9)
        with pytest.raises(ValueError):
            metrics.fano_error_bound(0.0, 0.0)

    @pytest.mark.parametrize("p, q, r, T", list(product([0.2, 0.5, 0.9], [0.3, 0.6], [0.1, 0.5], [1, 3, 10])))
    def test_inequality_exhaustive(self, p, q, r, T):
        model = SingleEdgeModel(p, q, r, T)
        joint, est = single_edge_joint(model)
        # joint of (true a, MAP estimate)
        pe = np.zeros((2, 2))
        for n, a_hat in enumerate(est):
            pe[:, a_hat] += joint[:, n]
        p_error = pe[0, 1] + pe[1, 0]
        col = pe.sum(axis=0)
        h_cond = sum(
            -pe[a, b] * math.log2(pe[a, b] / col[b]) for a in range(2) for b in range(2) if pe[a, b] > 0
        )
        h_g = float(binary_entropy(p))
        assert metrics.fano_inequality_holds(h_cond, p_error, h_g)
        mi = h_g - edge_posterior_entropy(model)
        assert p_error >= metrics.fano_error_bound(mi, h_g) - 1e-12


class TestLossToReconstructability:
    def test_examples(self):
        assert metrics.reconstructability_from_loss(0.0, 3.0) == 1.0
        assert metrics.reconstructability_from_loss(3.0, 3.0) == 0.0

    @pytest.mark.parametrize("q, r, T", [(0.4, 0.2, 20), (0.9, 0.1, 5), (0.3, 0.35, 50)])
    def test_equals_reconstructability_when_model_matches(self, q, r, T):
        model = SingleEdgeModel(0.5, q, r, T)
        joint, _ = single_edge_joint(model)
        expected_loss = 0.0
        for n in range(T + 1):
            pi = np.array([[0, 1], [1, 0]]) * float(edge_posterior(model, n))
            for a in (0, 1):
                truth = np.array([[0, a], [a, 0]])
                expected_loss += joint[a, n] * metrics.posterior_loss(truth, pi, clip=0.0)
        approx = metrics.reconstructability_from_loss(expected_loss, 1.0)
        assert approx == pytest.approx(edge_reconstructability(model), abs=1e-10)
