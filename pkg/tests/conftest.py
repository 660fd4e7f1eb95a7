"""Shared helpers: independent oracles and seeded random graph builders."""

from __future__ import annotations

import itertools
import random
from pathlib import Path

import pytest

from homcount.graphs import Graph

FIXTURES = Path(__file__).parent / "fixtures"


def naive_hom(f: Graph, g: Graph, weights=None):
    """Definition-level oracle: enumerate every map V(F) -> V(G).

    Independent of the library's counting code paths (no pruning, no DP);
    only suitable for tiny inputs.
    """
    nf, ng = f.num_vertices, g.num_vertices
    edges = list(f.edges())
    total = 0 if weights is None else 0.0
    for image in itertools.product(range(ng), repeat=nf):
        if all(g.has_edge(image[u], image[v]) for u, v in edges):
            if weights is None:
                total += 1
            else:
                prod = 1.0
                for u in range(nf):
                    prod *= weights[image[u]]
                total += prod
    return total


def random_simple_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(n, edges)


def random_connected_graph(rng: random.Random, n: int, p: float) -> Graph:
    while True:
        g = random_simple_graph(rng, n, p)
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in g.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) == n:
            return g


def brute_isomorphic(a: Graph, b: Graph) -> bool:
    if a.num_vertices != b.num_vertices or a.num_edges != b.num_edges:
        return False
    n = a.num_vertices
    edges_a = set(a.edges())
    for perm in itertools.permutations(range(n)):
        if all(
            b.has_edge(perm[u], perm[v]) for u, v in edges_a
        ):
            # edge counts match, so edge-preserving bijection = isomorphism
            return True
    return False


def graphs_up_to_iso(max_n: int) -> list[Graph]:
    """One representative per isomorphism class, 1..max_n vertices."""
    reps: list[Graph] = []
    for n in range(1, max_n + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for bits in range(1 << len(pairs)):
            g = Graph(n, [pairs[i] for i in range(len(pairs)) if bits >> i & 1])
            if not any(
                r.num_vertices == n and brute_isomorphic(g, r) for r in reps
            ):
                reps.append(g)
    return reps


@pytest.fixture(scope="session")
def small_graph_atlas() -> list[Graph]:
    atlas = graphs_up_to_iso(4)
    assert len(atlas) == 1 + 2 + 4 + 11
    return atlas
