"""Undirected loopy multigraphs with O(1) edge queries.

Adjacency follows the self-loop convention ``a_ii = 2 * (number of loops)``,
so that ``degree_i = sum_j a_ij`` and ``sum_i degree_i = 2 E``.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

MODES = ("simple", "multi")


class GraphError(ValueError):
    """Raised on invalid mutations (underflow, simple-mode violations)."""


class Graph:
    """Undirected multigraph on nodes ``0..n_nodes-1``.

    Parameters
    ----------
    n_nodes : int
        Number of labeled nodes.
    mode : {"simple", "multi"}
        ``"simple"`` forbids self-loops and multiedges.
    """

    def __init__(self, n_nodes, mode="simple"):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        self.n_nodes = int(n_nodes)
        self.mode = mode
        self.adjacency = np.zeros((self.n_nodes, self.n_nodes), dtype=np.int64)
        self.degrees = np.zeros(self.n_nodes, dtype=np.int64)
        self.edge_total = 0

    @classmethod
    def from_edges(cls, n_nodes, edges, mode="simple"):
        """Build from ``(i, j)`` or ``(i, j, multiplicity)`` tuples."""
        g = cls(n_nodes, mode)
        for edge in edges:
            i, j = int(edge[0]), int(edge[1])
            mult = int(edge[2]) if len(edge) > 2 else 1
            for _ in range(mult):
                g.toggle_edge(i, j, +1)
        return g

    @classmethod
    def from_adjacency(cls, adjacency, mode="multi"):
        adjacency = np.asarray(adjacency, dtype=np.int64)
        if adjacency.ndim != 2 or adjacency.shape[0] != adjacency.shape[1]:
            raise GraphError("adjacency must be square")
        if not np.array_equal(adjacency, adjacency.T):
            raise GraphError("adjacency must be symmetric")
        if np.any(adjacency < 0) or np.any(np.diag(adjacency) % 2):
            raise GraphError("negative entries or odd self-loop counts")
        g = cls(adjacency.shape[0], mode)
        if mode == "simple" and (np.any(adjacency > 1) or np.any(np.diag(adjacency))):
            raise GraphError("simple graphs admit no multiedges or self-loops")
        g.adjacency = adjacency.copy()
        g.degrees = g.adjacency.sum(axis=1)
        g.edge_total = int(g.degrees.sum() // 2)
        return g

    def copy(self):
        g = Graph(self.n_nodes, self.mode)
        g.adjacency = self.adjacency.copy()
        g.degrees = self.degrees.copy()
        g.edge_total = self.edge_total
        return g

    def multiplicity(self, i, j):
        """Number of edges between i and j (loops on i when i == j)."""
        a = int(self.adjacency[i, j])
        return a // 2 if i == j else a

    def toggle_edge(self, i, j, delta):
        """Add (``delta=+1``) or remove (``delta=-1``) one edge (i, j)."""
        if delta not in (1, -1):
            raise GraphError(f"delta must be +1 or -1, got {delta}")
        if not (0 <= i < self.n_nodes and 0 <= j < self.n_nodes):
            raise IndexError(f"node out of range: ({i}, {j})")
        if i == j:
            if self.mode == "simple":
                raise GraphError("self-loops are not allowed in simple mode")
            if self.adjacency[i, i] + 2 * delta < 0:
                raise GraphError(f"no self-loop on node {i} to remove")
            self.adjacency[i, i] += 2 * delta
            self.degrees[i] += 2 * delta
        else:
            new = self.adjacency[i, j] + delta
            if new < 0:
                raise GraphError(f"no edge ({i}, {j}) to remove")
            if self.mode == "simple" and new > 1:
                raise GraphError(f"edge ({i}, {j}) already present in simple mode")
            self.adjacency[i, j] = new
            self.adjacency[j, i] = new
            self.degrees[i] += delta
            self.degrees[j] += delta
        self.edge_total += delta
        return self

    def edges(self):
        """List of ``(i, j, multiplicity)`` with ``i <= j``."""
        rows, cols = np.nonzero(np.triu(self.adjacency))
        out = []
        for i, j in zip(rows.tolist(), cols.tolist()):
            out.append((i, j, self.multiplicity(i, j)))
        return out

    def edge_array(self):
        """``(E, 2)`` array with one row per edge unit (multiedges repeated)."""
        rows = []
        for i, j, mult in self.edges():
            rows.extend([(i, j)] * mult)
        return np.array(rows, dtype=np.int64).reshape(-1, 2)

    def is_simple(self):
        return not (np.any(self.adjacency > 1) or np.any(np.diag(self.adjacency)))

    def audit(self):
        """Raise ``GraphError`` if cached degrees or edge count drifted."""
        a = self.adjacency
        if not np.array_equal(a, a.T):
            raise GraphError("asymmetric adjacency")
        if np.any(a < 0) or np.any(np.diag(a) % 2):
            raise GraphError("negative entry or odd self-loop count")
        if not np.array_equal(self.degrees, a.sum(axis=1)):
            raise GraphError("degree cache out of sync")
        if 2 * self.edge_total != int(self.degrees.sum()):
            raise GraphError("edge total out of sync")
        if self.mode == "simple" and not self.is_simple():
            raise GraphError("simple-mode graph holds a loop or multiedge")

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n_nodes == other.n_nodes
            and np.array_equal(self.adjacency, other.adjacency)
        )

    def __repr__(self):
        return f"Graph(n_nodes={self.n_nodes}, edges={self.edge_total}, mode={self.mode!r})"


def toggle_edge(g, i, j, delta):
    return g.toggle_edge(i, j, delta)


@dataclass
class NeighborActivity:
    """Inactive (``n``) and active (``m``) neighbor counts, both ``(N, T)``."""

    n: np.ndarray
    m: np.ndarray

    def copy(self):
        return NeighborActivity(self.n.copy(), self.m.copy())


def neighbor_activity(g, x):
    """Count active and inactive neighbors of every node at every time."""
    x = np.asarray(x)
    if x.ndim != 2 or x.shape[0] != g.n_nodes:
        raise ValueError(f"time series has shape {x.shape}, expected ({g.n_nodes}, T)")
    m = g.adjacency @ x.astype(np.int64)
    n = g.degrees[:, None] - m
    return NeighborActivity(n=n, m=m)


def update_neighbor_activity(table, i, j, delta, x):
    """Patch ``table`` in O(T) after ``toggle_edge(g, i, j, delta)``."""
    xi = x[i].astype(np.int64)
    if i == j:
        table.m[i] += 2 * delta * xi
        table.n[i] += 2 * delta * (1 - xi)
        return table
    xj = x[j].astype(np.int64)
    table.m[i] += delta * xj
    table.n[i] += delta * (1 - xj)
    table.m[j] += delta * xi
    table.n[j] += delta * (1 - xi)
    return table


def write_edge_list(g, path):
    lines = [f"{g.n_nodes} {g.edge_total} {g.mode}"]
    lines += [f"{i} {j} {mult}" for i, j, mult in g.edges()]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path):
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty edge-list file")
    n_nodes, n_edges, mode = int(lines[0][0]), int(lines[0][1]), lines[0][2]
    g = Graph.from_edges(n_nodes, [tuple(int(v) for v in ln) for ln in lines[1:]], mode=mode)
    if g.edge_total != n_edges:
        raise ValueError(f"{path}: header declares {n_edges} edges, found {g.edge_total}")
    return g
