import math
from collections import Counter

import numpy as np
import pytest
from scipy.stats import chisquare

from conftest import graph_key
from reconlab._math import logsumexp2
from reconlab.graph import Graph
from reconlab.priors import (
    EdgeCountPrior,
    Partition,
    PriorModel,
    block_edge_matrix,
    enumerate_graphs,
    enumerate_partitions,
    enumerate_prior_support,
    log_edge_count_prior,
    log_partition_prior,
    log_prior,
    log_prior_cm,
    log_prior_er,
    log_prior_sbm,
    log_prior_ucm,
    sample_prior,
)

LOG3 = math.log2(3)


def delta(e):
    return EdgeCountPrior("delta", e)


class TestErdosRenyi:
    def test_simple_three_nodes(self):
        g = Graph.from_edges(3, [(0, 1)])
        assert log_prior_er(g, 1, "simple") == pytest.approx(-LOG3)

    def test_multi_two_nodes(self):
        g = Graph.from_edges(2, [(0, 0)], mode="multi")
        assert log_prior_er(g, 1, "multi") == pytest.approx(-LOG3)

    def test_large_matches_exact_binomial(self):
        pairs = list(zip(*np.triu_indices(100, k=1)))[:250]
        g = Graph.from_edges(100, pairs)
        exact = -math.log2(math.comb(4950, 250))
        assert log_prior_er(g, 250, "simple") == pytest.approx(exact, rel=1e-12)

    def test_edge_count_mismatch(self):
        with pytest.raises(ValueError):
            log_prior_er(Graph(3), 1)


class TestConfigurationModel:
    def test_single_pairing(self):
        g = Graph.from_edges(2, [(0, 1)], mode="multi")
        assert log_prior_cm(g, [1, 1]) == pytest.approx(0.0)

    def test_two_two_pairings(self):
        double = Graph.from_edges(2, [(0, 1), (0, 1)], mode="multi")
        loops = Graph.from_edges(2, [(0, 0), (1, 1)], mode="multi")
        assert 2 ** log_prior_cm(double, [2, 2]) == pytest.approx(2 / 3)
        assert 2 ** log_prior_cm(loops, [2, 2]) == pytest.approx(1 / 3)

    def test_forced_self_loop(self):
        g = Graph.from_edges(2, [(0, 0)], mode="multi")
        assert log_prior_cm(g, [2, 0]) == pytest.approx(0.0)

    def test_degree_mismatch(self):
        with pytest.raises(ValueError):
            log_prior_cm(Graph.from_edges(2, [(0, 1)], mode="multi"), [2, 0])

    def test_ucm_single_edge(self):
        g = Graph.from_edges(2, [(0, 1)], mode="multi")
        assert log_prior_ucm(g, [1, 1], 1) == pytest.approx(-LOG3)

    def test_ucm_sum_mismatch(self):
        with pytest.raises(ValueError):
            log_prior_ucm(Graph.from_edges(2, [(0, 1)], mode="multi"), [1, 1], 2)

    def test_ucm_total_mass_two_nodes(self):
        model = PriorModel("ucm", delta(1))
        total = [log_prior(model, g) for g in enumerate_graphs(2, 1, "multi")]
        assert 2 ** logsumexp2(total) == pytest.approx(1.0, abs=1e-12)


class TestStochasticBlockModel:
    def test_single_block_graph_term(self):
        g = Graph.from_edges(2, [(0, 1)], mode="multi")
        p = Partition([0, 0])
        # one block, 3 loopy pairs, plus B=1 of 2 and the one-block partition
        full = log_prior_sbm(g, p, block_edge_matrix(g, p), 1, 1)
        assert full == pytest.approx(-LOG3 - 1.0)

    def test_single_block_equals_loopy_er(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3), (1, 1)], mode="multi")
        p = Partition(np.zeros(4, dtype=int))
        sbm = log_prior_sbm(g, p, block_edge_matrix(g, p), 3, 1, multigraph=True)
        # graph term is the loopy ER count; remaining terms: e-matrix and B
        er = log_prior_er(g, 3, "multi")
        assert sbm == pytest.approx(er + 0.0 - 2.0)

    def test_three_nodes_one_block(self):
        g = Graph.from_edges(3, [(0, 1)], mode="multi")
        p = Partition([0, 0, 0])
        value = log_prior_sbm(g, p, block_edge_matrix(g, p), 1, 1)
        # 6 loopy pairs in the block, P(b | B=1) = 1, P(B=1) = 1/3
        assert value == pytest.approx(-math.log2(6) + 0.0 - LOG3)
        assert log_partition_prior(p, 3) == pytest.approx(-LOG3)

    def test_empty_block_rejected(self):
        with pytest.raises(ValueError):
            Partition([0, 2, 2])

    def test_inconsistent_edge_matrix(self):
        g = Graph.from_edges(2, [(0, 1)], mode="multi")
        p = Partition([0, 1])
        with pytest.raises(ValueError):
            log_prior_sbm(g, p, np.zeros((2, 2), dtype=int), 1, 2)

    def test_edge_matrix_diagonal_even(self):
        rng = np.random.default_rng(3)
        model = PriorModel("sbm", delta(6))
        for _ in range(20):
            g, hyper = sample_prior(model, rng, 6)
            e = block_edge_matrix(g, hyper["partition"])
            assert np.all(np.diag(e) % 2 == 0)
            assert e.sum() == 2 * g.edge_total


class TestEdgeCountPrior:
    def test_delta(self):
        assert log_edge_count_prior(250, delta(250)) == 0.0
        assert log_edge_count_prior(249, delta(250)) == -math.inf

    def test_geometric_value(self):
        assert log_edge_count_prior(0, EdgeCountPrior("geometric", 1.0)) == pytest.approx(-1.0)

    def test_geometric_normalizes(self):
        lam = 7.5
        e = np.arange(10**6 + 1)
        logs = e * math.log2(lam) - (e + 1) * math.log2(lam + 1)
        assert np.sum(np.exp2(logs)) == pytest.approx(1.0, abs=1e-9)


MODELS = [
    ("er_simple", {}),
    ("er_multi", {}),
    ("ucm", {}),
    ("sbm", {"sbm_multigraph": True}),
]


class TestNormalization:
    @pytest.mark.parametrize("kind,extra", MODELS)
    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("e", [0, 1, 2, 3])
    def test_sums_to_one(self, kind, extra, n, e):
        if kind == "er_simple" and e > n * (n - 1) // 2:
            pytest.skip("no simple graph with that many edges")
        model = PriorModel(kind, delta(e), **extra)
        mode = model.graph_mode
        if kind == "sbm":
            terms = [log_prior(model, g, b) for g in enumerate_graphs(n, e, mode) for b in enumerate_partitions(n)]
        else:
            terms = [log_prior(model, g) for g in enumerate_graphs(n, e, mode)]
        assert 2 ** logsumexp2(terms) == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("degrees", [[1, 1], [2, 2], [2, 1, 1], [3, 1, 2], [2, 2, 2], [1, 1, 1, 1], [2, 2, 1, 1]])
    def test_cm_sums_to_one(self, degrees):
        model = PriorModel("cm", degrees=degrees)
        e = sum(degrees) // 2
        terms = [log_prior(model, g) for g in enumerate_graphs(len(degrees), e, "multi")]
        assert 2 ** logsumexp2(terms) == pytest.approx(1.0, abs=1e-10)

    def test_literal_sbm_is_subnormalized(self):
        model = PriorModel("sbm", delta(2))
        terms = [log_prior(model, g, b) for g in enumerate_graphs(3, 2, "multi") for b in enumerate_partitions(3)]
        assert 2 ** logsumexp2(terms) < 1.0


def _entropy(support):
    lp = np.array([v for _, v in support])
    return float(-np.sum(np.exp2(lp) * lp))


class TestSupportsAndEntropy:
    def test_support_inclusion(self):
        cm = {graph_key(g) for g, _ in enumerate_prior_support(PriorModel("cm", degrees=[2, 1, 1]), 3)}
        ucm = {graph_key(g) for g, _ in enumerate_prior_support(PriorModel("ucm", delta(2)), 3)}
        er = {graph_key(g) for g, _ in enumerate_prior_support(PriorModel("er_multi", delta(2)), 3)}
        assert cm < ucm <= er

    def test_entropy_ordering(self):
        h_er = _entropy(enumerate_prior_support(PriorModel("er_multi", delta(2)), 3))
        h_sbm = _entropy(enumerate_prior_support(PriorModel("sbm", delta(2), sbm_multigraph=True), 3))
        h_cm = _entropy(enumerate_prior_support(PriorModel("cm", degrees=[2, 1, 1]), 3))
        assert h_er >= h_sbm >= h_cm


class TestSampling:
    def test_er_uniform(self):
        rng = np.random.default_rng(0)
        model = PriorModel("er_simple", delta(1))
        counts = Counter(graph_key(sample_prior(model, rng, 3)[0]) for _ in range(30_000))
        assert len(counts) == 3
        assert chisquare(list(counts.values())).pvalue > 0.001

    def test_cm_pairing_frequency(self):
        rng = np.random.default_rng(1)
        model = PriorModel("cm", degrees=[2, 2])
        draws = [sample_prior(model, rng, 2)[0] for _ in range(30_000)]
        frac = np.mean([g.multiplicity(0, 1) == 2 for g in draws])
        assert abs(frac - 2 / 3) < 3 * math.sqrt(2 / 9 / 30_000)

    def test_zero_edges(self):
        g, hyper = sample_prior(PriorModel("er_simple", delta(0)), np.random.default_rng(0), 5)
        assert g.edge_total == 0 and hyper["E"] == 0

    @pytest.mark.parametrize("kind,extra", [("er_multi", {}), ("ucm", {}), ("sbm", {"sbm_multigraph": True})])
    def test_matches_log_prior(self, kind, extra):
        rng = np.random.default_rng(2)
        model = PriorModel(kind, delta(2), **extra)
        support = enumerate_prior_support(model, 3)
        keys = [graph_key(g) for g, _ in support]
        expected = np.exp2([lp for _, lp in support])
        counts = Counter(graph_key(sample_prior(model, rng, 3)[0]) for _ in range(20_000))
        observed = np.array([counts.get(k, 0) for k in keys])
        assert observed.sum() == 20_000
        assert chisquare(observed, expected * 20_000).pvalue > 0.001
