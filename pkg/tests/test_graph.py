import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reconlab.graph import (
    Graph,
    GraphError,
    neighbor_activity,
    read_edge_list,
    toggle_edge,
    update_neighbor_activity,
    write_edge_list,
)


class TestToggleEdge:
    def test_single_insertion(self):
        g = Graph(3)
        toggle_edge(g, 0, 1, +1)
        assert g.adjacency[0, 1] == g.adjacency[1, 0] == 1
        assert g.degrees.tolist() == [1, 1, 0]
        assert g.edge_total == 1

    def test_self_loop_counts_twice(self):
        g = Graph(3, "multi")
        toggle_edge(g, 2, 2, +1)
        assert g.adjacency[2, 2] == 2
        assert g.degrees[2] == 2
        assert g.edge_total == 1
        assert g.multiplicity(2, 2) == 1

    def test_remove_absent_edge_underflows(self):
        with pytest.raises(GraphError):
            toggle_edge(Graph(3), 0, 1, -1)

    def test_simple_mode_rejects_loops_and_multiedges(self):
        g = Graph(3)
        with pytest.raises(GraphError):
            toggle_edge(g, 1, 1, +1)
        toggle_edge(g, 0, 1, +1)
        with pytest.raises(GraphError):
            toggle_edge(g, 0, 1, +1)

    def test_fuzzed_toggles_keep_invariants(self):
        rng = np.random.default_rng(0)
        g = Graph(8, "multi")
        for _ in range(10_000):
            i, j = rng.integers(8, size=2)
            if g.multiplicity(i, j) > 0 and rng.random() < 0.5:
                g.toggle_edge(i, j, -1)
            else:
                g.toggle_edge(i, j, +1)
        g.audit()
        a = g.adjacency
        assert np.array_equal(a, a.T)
        assert np.all(np.diag(a) % 2 == 0)
        assert g.degrees.sum() == 2 * g.edge_total
        assert np.array_equal(g.degrees, a.sum(axis=1))


class TestNeighborActivity:
    def test_triangle_all_active(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        t = neighbor_activity(g, np.ones((3, 4), dtype=np.uint8))
        assert np.all(t.m == 2) and np.all(t.n == 0)

    def test_path(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        t = neighbor_activity(g, np.array([[1], [0], [0]]))
        assert t.m[:, 0].tolist() == [0, 1, 0]

    def test_multiedge_counts_twice(self):
        g = Graph.from_edges(2, [(0, 1), (0, 1)], mode="multi")
        t = neighbor_activity(g, np.array([[0], [1]]))
        assert t.m[0, 0] == 2

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            neighbor_activity(Graph(3), np.zeros((2, 5)))

    def test_never_active_endpoint_changes_only_n(self):
        g = Graph(3)
        x = np.array([[1, 0, 1], [0, 0, 0], [1, 1, 0]], dtype=np.uint8)
        t = neighbor_activity(g, x)
        before = t.copy()
        g.toggle_edge(0, 1, +1)
        update_neighbor_activity(t, 0, 1, +1, x)
        assert np.array_equal(t.m[0], before.m[0])
        assert not np.array_equal(t.n[0], before.n[0])

    def test_involution(self):
        rng = np.random.default_rng(1)
        x = rng.integers(0, 2, (5, 20))
        g = Graph.from_edges(5, [(0, 1), (2, 3)], mode="multi")
        t = neighbor_activity(g, x)
        before = t.copy()
        update_neighbor_activity(t, 1, 4, +1, x)
        update_neighbor_activity(t, 1, 4, -1, x)
        assert np.array_equal(t.m, before.m) and np.array_equal(t.n, before.n)

    @given(
        n=st.integers(2, 10),
        t=st.integers(1, 50),
        seed=st.integers(0, 2**32 - 1),
        steps=st.integers(1, 30),
    )
    def test_incremental_matches_recompute(self, n, t, seed, steps):
        rng = np.random.default_rng(seed)
        x = rng.integers(0, 2, (n, t))
        g = Graph(n, "multi")
        table = neighbor_activity(g, x)
        for _ in range(steps):
            i, j = (int(v) for v in rng.integers(n, size=2))
            delta = -1 if g.multiplicity(i, j) > 0 and rng.random() < 0.5 else +1
            g.toggle_edge(i, j, delta)
            update_neighbor_activity(table, i, j, delta, x)
            fresh = neighbor_activity(g, x)
            assert np.array_equal(table.m, fresh.m)
            assert np.array_equal(table.n, fresh.n)
            assert np.all(table.n + table.m == g.degrees[:, None])
            assert np.all(table.n >= 0) and np.all(table.m >= 0)


def test_edge_list_roundtrip(tmp_path):
    g = Graph.from_edges(4, [(0, 1), (0, 1), (2, 2), (1, 3)], mode="multi")
    path = tmp_path / "g.txt"
    write_edge_list(g, path)
    assert path.read_text().splitlines()[0] == "4 4 multi"
    assert read_edge_list(path) == g


def test_edge_list_header_mismatch(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("3 2 simple\n0 1 1\n")
    with pytest.raises(ValueError):
        read_edge_list(path)
