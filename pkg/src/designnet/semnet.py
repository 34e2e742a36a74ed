"""Similarity matrices and MST-plus-strongest-links backbone graphs."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .extract import TermSet
from .kb import KnowledgeBase


@dataclass
class SimilarityMatrix:
    labels: list[str]
    weights: np.ndarray  # symmetric (n, n); the diagonal is unused and kept at 0

    @property
    def n(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class Node:
    id: int
    label: str
    degree: int


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    weight: float
    mst: bool


@dataclass
class WeightedGraph:
    nodes: list[Node]
    edges: list[Edge]
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class BackboneConfig:
    """Edge budget ``round(multiplier * N)``; ties always break on node ids."""

    multiplier: float = 2.0

    def __post_init__(self):
        if not (self.multiplier >= 1.0 and math.isfinite(self.multiplier)):
            raise ValueError(f"multiplier must be a finite value >= 1, got {self.multiplier}")


def build_similarity_matrix(terms: TermSet | list[str], kb: KnowledgeBase) -> SimilarityMatrix:
    labels = list(terms.terms if isinstance(terms, TermSet) else terms)
    n = len(labels)
    if n < 1:
        raise ValueError("need at least one term")
    w = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            w[i, j] = w[j, i] = kb.similarity(labels[i], labels[j])
    return SimilarityMatrix(labels, w)


def _ranked_pairs(weights: np.ndarray) -> list[tuple[int, int]]:
    # weight descending, then smaller id, then larger id
    n = weights.shape[0]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    pairs.sort(key=lambda p: (-weights[p[0], p[1]], p[0], p[1]))
    return pairs


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def max_spanning_tree(matrix: SimilarityMatrix) -> list[tuple[int, int, float]]:
    """Kruskal on the complete graph; returns ``(i, j, w)`` with ``i < j`` in acceptance order."""
    w = matrix.weights
    n = matrix.n
    dsu = _DisjointSet(n)
    tree = []
    for i, j in _ranked_pairs(w):
        if dsu.union(i, j):
            tree.append((i, j, float(w[i, j])))
            if len(tree) == n - 1:
                break
    return tree


def target_edge_count(n: int, multiplier: float) -> int:
    # round half up, capped by the complete graph
    return min(math.floor(multiplier * n + 0.5), n * (n - 1) // 2)


def backbone(matrix: SimilarityMatrix, config: BackboneConfig | None = None, meta: dict | None = None) -> WeightedGraph:
    config = config or BackboneConfig()
    n = matrix.n
    w = matrix.weights
    tree = max_spanning_tree(matrix)
    budget = max(target_edge_count(n, config.multiplier), len(tree))
    edges = [Edge(i, j, wt, True) for i, j, wt in tree]
    in_tree = {(i, j) for i, j, _ in tree}
    if len(edges) < budget:
        for i, j in _ranked_pairs(w):
            if (i, j) in in_tree:
                continue
            edges.append(Edge(i, j, float(w[i, j]), False))
            if len(edges) == budget:
                break
    degree = Counter()
    for e in edges:
        degree[e.source] += 1
        degree[e.target] += 1
    nodes = [Node(i, label, degree[i]) for i, label in enumerate(matrix.labels)]
    full_meta = {"n_terms": n, "multiplier": config.multiplier}
    full_meta.update(meta or {})
    return WeightedGraph(nodes, edges, full_meta)


def connected_components(n: int, edges) -> int:
    dsu = _DisjointSet(n)
    comps = n
    for e in edges:
        s, t = (e.source, e.target) if isinstance(e, Edge) else e[:2]
        if dsu.union(s, t):
            comps -= 1
    return comps


def graph_stats(graph: WeightedGraph) -> dict:
    n, m = graph.n, len(graph.edges)
    weights = [e.weight for e in graph.edges]
    hist = Counter(node.degree for node in graph.nodes)
    return {
        "nodes": n,
        "edges": m,
        "mst_edges": sum(e.mst for e in graph.edges),
        "density": 2.0 * m / (n * (n - 1)) if n > 1 else 0.0,
        "min_weight": min(weights) if weights else None,
        "max_weight": max(weights) if weights else None,
        "mean_weight": math.fsum(weights) / m if weights else None,
        "degree_histogram": {str(k): hist[k] for k in sorted(hist)},
        "components": connected_components(n, graph.edges),
    }
