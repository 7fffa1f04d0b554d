"""Simple undirected graphs and their adjacency, degree, and Laplacian matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on nodes 0 .. node_count-1.

    Edges are unordered pairs stored as (lo, hi) tuples with lo < hi.
    Self-loops, duplicate pairs, and out-of-range endpoints are rejected.
    """

    node_count: int
    edges: frozenset

    def __post_init__(self):
        if not isinstance(self.node_count, int) or self.node_count < 1:
            raise ValueError("node_count must be a positive integer")
        for n, m in self.edges:
            if n == m:
                raise ValueError(f"self-loop on node {n}")
            if not (0 <= n < m < self.node_count):
                raise ValueError(f"edge ({n}, {m}) out of range for {self.node_count} nodes")

    @classmethod
    def from_edges(cls, node_count: int, pairs: Iterable[Sequence[int]]) -> "Graph":
        """Build a graph from arbitrary (n, m) pairs, ordering endpoints and merging duplicates."""
        edges = set()
        for n, m in pairs:
            n, m = int(n), int(m)
            if n == m:
                raise ValueError(f"self-loop on node {n}")
            edges.add((n, m) if n < m else (m, n))
        return cls(node_count, frozenset(edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list:
        return sorted(self.edges)


def adjacency_matrix(g: Graph) -> np.ndarray:
    """Symmetric 0/1 adjacency matrix with zero diagonal."""
    a = np.zeros((g.node_count, g.node_count))
    for n, m in g.edges:
        a[n, m] = 1.0
        a[m, n] = 1.0
    return a


def degree_matrix(a: np.ndarray) -> np.ndarray:
    """Diagonal matrix of column sums of an adjacency matrix."""
    return np.diag(np.asarray(a).sum(axis=0))


def laplacian(g: Graph) -> np.ndarray:
    """Unnormalized graph Laplacian L = D - A."""
    a = adjacency_matrix(g)
    return degree_matrix(a) - a


def connected_component_count(g: Graph) -> int:
    parent = list(range(g.node_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for n, m in g.edges:
        rn, rm = find(n), find(m)
        if rn != rm:
            parent[rn] = rm
    return len({find(x) for x in range(g.node_count)})


def random_graph(node_count: int, edge_prob: float, rng: np.random.Generator,
                 require_connected: bool = False, max_tries: int = 1000) -> Graph:
    """Erdos-Renyi G(n, p) sample; optionally resample until connected."""
    iu = np.triu_indices(node_count, k=1)
    for _ in range(max_tries):
        mask = rng.random(len(iu[0])) < edge_prob
        g = Graph.from_edges(node_count, zip(iu[0][mask], iu[1][mask]))
        if not require_connected or connected_component_count(g) == 1:
            return g
    raise ValueError(f"no connected G({node_count}, {edge_prob}) sample in {max_tries} tries")


@dataclass
class LabeledDataset:
    """Ordered collection of graphs with one integer class label per graph.

    ``label_names`` keeps the original class identifiers when labels were
    re-coded (e.g. letter classes from index files). ``node_attributes`` holds
    per-graph parsed node attributes (positions etc.); they are carried along
    but never enter the embedding. The two-class minimum for classification is
    enforced by the evaluation entry points, not at construction.
    """

    graphs: list
    labels: np.ndarray
    name: str = ""
    label_names: list = None
    node_attributes: list = None

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if len(self.graphs) != len(self.labels):
            raise ValueError(
                f"{len(self.graphs)} graphs but {len(self.labels)} labels")
        if self.node_attributes is not None and len(self.node_attributes) != len(self.graphs):
            raise ValueError("node_attributes length does not match graphs")

    def __len__(self) -> int:
        return len(self.graphs)

    @property
    def class_count(self) -> int:
        return len(np.unique(self.labels))

    @property
    def max_node_count(self) -> int:
        return max(g.node_count for g in self.graphs)

    @property
    def mean_node_count(self) -> float:
        return float(np.mean([g.node_count for g in self.graphs]))

    @property
    def mean_edge_count(self) -> float:
        return float(np.mean([g.edge_count for g in self.graphs]))
