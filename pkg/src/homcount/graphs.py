"""Simple undirected graphs, vertex-featured graphs, and structural utilities.

Vertices are integers 0..n-1. Graphs are immutable after construction;
every transform returns a new value, so instances are safe to share
across threads.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence

import numpy as np


class Graph:
    """Immutable simple undirected graph (no self-loops, no parallel edges)."""

    __slots__ = ("num_vertices", "adjacency", "neighbor_sets", "num_edges")

    def __init__(self, num_vertices: int, edges: Iterable[tuple[int, int]] = ()):
        if num_vertices < 0:
            raise ValueError("num_vertices must be non-negative")
        sets: list[set[int]] = [set() for _ in range(num_vertices)]
        for u, v in edges:
            if not (0 <= u < num_vertices) or not (0 <= v < num_vertices):
                raise IndexError(f"edge ({u}, {v}) out of range for {num_vertices} vertices")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}: graph is not simple")
            sets[u].add(v)
            sets[v].add(u)
        object.__setattr__(self, "num_vertices", num_vertices)
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(s)) for s in sets))
        object.__setattr__(self, "neighbor_sets", tuple(frozenset(s) for s in sets))
        object.__setattr__(self, "num_edges", sum(len(s) for s in sets) // 2)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield each edge once as (u, v) with u < v, in sorted order."""
        for u in range(self.num_vertices):
            for v in self.adjacency[u]:
                if u < v:
                    yield (u, v)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.num_vertices, self.num_vertices), dtype=np.int64)
        for u in range(self.num_vertices):
            for v in self.adjacency[u]:
                a[u, v] = 1
        return a

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.num_vertices == other.num_vertices and self.adjacency == other.adjacency

    def __hash__(self) -> int:
        return hash((self.num_vertices, self.adjacency))

    def __repr__(self) -> str:
        return f"Graph(n={self.num_vertices}, m={self.num_edges})"


def build_graph(num_vertices: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a simple graph, deduplicating and symmetrizing the edge list."""
    return Graph(num_vertices, edges)


class FeaturedGraph:
    """A graph together with a per-vertex feature matrix of shape (n, p).

    Feature entries must lie in [0, 1] at construction. Internal transforms
    (twin reduction adds weights) bypass the range check via `unchecked`.
    """

    __slots__ = ("graph", "features")

    def __init__(self, graph: Graph, features):
        feats = np.asarray(features, dtype=np.float64)
        if feats.ndim != 2:
            raise ValueError("features must be a 2-d matrix (num_vertices x p)")
        if feats.shape[0] != graph.num_vertices:
            raise ValueError(
                f"feature rows ({feats.shape[0]}) do not match num_vertices ({graph.num_vertices})"
            )
        if feats.size and (np.min(feats) < 0.0 or np.max(feats) > 1.0):
            raise ValueError("feature entries must lie in [0, 1]")
        feats.setflags(write=False)
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "features", feats)

    @classmethod
    def unchecked(cls, graph: Graph, features) -> "FeaturedGraph":
        """Construct without the [0, 1] range check (shape is still validated)."""
        fg = cls.__new__(cls)
        feats = np.asarray(features, dtype=np.float64)
        if feats.ndim != 2 or feats.shape[0] != graph.num_vertices:
            raise ValueError("features must have shape (num_vertices, p)")
        feats.setflags(write=False)
        object.__setattr__(fg, "graph", graph)
        object.__setattr__(fg, "features", feats)
        return fg

    def __setattr__(self, name, value):
        raise AttributeError("FeaturedGraph is immutable")

    @property
    def feature_dim(self) -> int:
        return self.features.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FeaturedGraph):
            return NotImplemented
        return self.graph == other.graph and np.array_equal(self.features, other.features)

    def __repr__(self) -> str:
        return f"FeaturedGraph(n={self.graph.num_vertices}, p={self.feature_dim})"


def check_permutation(sigma: Sequence[int], n: int) -> None:
    """Raise unless sigma is a length-n bijection on 0..n-1."""
    if len(sigma) != n:
        raise ValueError(f"permutation length {len(sigma)} does not match {n} vertices")
    if sorted(sigma) != list(range(n)):
        raise ValueError("mapping is not a permutation of 0..n-1")


def permute(g: Graph, sigma: Sequence[int]) -> Graph:
    """Relabel vertices: edge (u, v) becomes (sigma[u], sigma[v])."""
    check_permutation(sigma, g.num_vertices)
    return Graph(g.num_vertices, ((sigma[u], sigma[v]) for u, v in g.edges()))


def inverse_permutation(sigma: Sequence[int]) -> list[int]:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s] = i
    return inv


def permute_featured(fg: FeaturedGraph, sigma: Sequence[int]) -> FeaturedGraph:
    """Relabel a featured graph; feature row of u moves to sigma[u]."""
    check_permutation(sigma, fg.graph.num_vertices)
    n = fg.graph.num_vertices
    feats = np.empty_like(fg.features)
    for u in range(n):
        feats[sigma[u]] = fg.features[u]
    return FeaturedGraph.unchecked(permute(fg.graph, sigma), feats)


def degree_sequence(g: Graph) -> list[int]:
    """Sorted (ascending) vertex degrees."""
    return sorted(len(a) for a in g.adjacency)


def bipartite_coloring(g: Graph) -> Optional[list[int]]:
    """A proper 2-coloring (values 0/1) if one exists, else None."""
    color = [-1] * g.num_vertices
    for start in range(g.num_vertices):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for v in g.adjacency[u]:
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    return color


def is_bipartite(g: Graph) -> bool:
    """True iff g contains no odd cycle."""
    return bipartite_coloring(g) is not None


def disjoint_union(*graphs: Graph) -> Graph:
    """Disjoint union; vertices of later graphs are shifted up."""
    total = sum(g.num_vertices for g in graphs)
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.num_vertices
    return Graph(total, edges)


def _drop_vertices(g: Graph, weights: np.ndarray, drop: set[int]) -> tuple[Graph, np.ndarray]:
    keep = [v for v in range(g.num_vertices) if v not in drop]
    relabel = {v: i for i, v in enumerate(keep)}
    edges = [
        (relabel[u], relabel[v])
        for u, v in g.edges()
        if u not in drop and v not in drop
    ]
    return Graph(len(keep), edges), weights[keep]


def _smallest_twin_pair(g: Graph) -> Optional[tuple[int, int]]:
    # Twins have equal open neighborhoods, which forces them non-adjacent.
    by_nbhd: dict[frozenset[int], int] = {}
    best = None
    for v in range(g.num_vertices):
        s = g.neighbor_sets[v]
        if s in by_nbhd:
            pair = (by_nbhd[s], v)
            if best is None or pair < best:
                best = pair
        else:
            by_nbhd[s] = v
    return best


def twin_reduce(fg: FeaturedGraph) -> FeaturedGraph:
    """Contract twin vertices (weights add) and drop zero-weight vertices.

    Requires scalar weights (p = 1), all non-negative. The reduction is
    canonicalized by always contracting the lexicographically smallest
    twin pair, so the output is deterministic; the reduced value is
    independent of contraction order regardless.
    """
    if fg.feature_dim != 1:
        raise ValueError("twin reduction supports scalar weights only (p = 1)")
    weights = fg.features[:, 0].copy()
    if weights.size and np.min(weights) < 0:
        raise ValueError("twin reduction requires non-negative weights")
    g = fg.graph
    while True:
        zeros = {v for v in range(g.num_vertices) if weights[v] == 0.0}
        if zeros:
            g, weights = _drop_vertices(g, weights, zeros)
            continue
        pair = _smallest_twin_pair(g)
        if pair is None:
            break
        u, v = pair
        weights = weights.copy()
        weights[u] += weights[v]
        g, weights = _drop_vertices(g, weights, {v})
    return FeaturedGraph.unchecked(g, weights.reshape(-1, 1))
