"""Pattern catalogs: small graphs whose homomorphism counts form embedding columns.

Families are enumerated deterministically (ordered by size, then canonical
code) so embedding columns are stable across runs and platforms. Tree-shaped
patterns are deduplicated with AHU codes; each pattern can produce a nice
tree decomposition for the bounded-treewidth counting algorithm.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence

from .graphs import Graph

MAX_TREE_CATALOG_SIZE = 12


@dataclass(frozen=True)
class Pattern:
    graph: Graph
    family: str  # tree | cycle | star | path | custom
    size: int
    canonical_code: str

    def __repr__(self) -> str:
        return f"Pattern({self.family}, n={self.size})"


@dataclass(frozen=True)
class TreeDecomposition:
    """A nice tree decomposition: leaf / introduce / forget / join nodes."""

    tree: Graph
    bags: tuple[frozenset[int], ...]
    width: int
    root: int
    node_kind: tuple[str, ...]

    def children(self) -> list[list[int]]:
        """Child lists per node, oriented away from the root."""
        kids: list[list[int]] = [[] for _ in range(self.tree.num_vertices)]
        seen = {self.root}
        stack = [self.root]
        while stack:
            t = stack.pop()
            for s in self.tree.neighbors(t):
                if s not in seen:
                    seen.add(s)
                    kids[t].append(s)
                    stack.append(s)
        return kids


# ---------------------------------------------------------------------------
# canonical codes


def _is_tree(g: Graph) -> bool:
    if g.num_edges != g.num_vertices - 1:
        return False
    if g.num_vertices == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in g.adjacency[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == g.num_vertices


def _tree_centers(g: Graph) -> list[int]:
    n = g.num_vertices
    if n <= 2:
        return list(range(n))
    degree = [g.degree(v) for v in range(n)]
    layer = [v for v in range(n) if degree[v] == 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            degree[v] = 0
            for u in g.adjacency[v]:
                if degree[u] > 1:
                    degree[u] -= 1
                    if degree[u] == 1:
                        nxt.append(u)
        layer = nxt
    return sorted(layer)


def _rooted_ahu(g: Graph, root: int) -> str:
    code: dict[int, str] = {}
    stack = [(root, -1, False)]
    while stack:
        v, parent, expanded = stack.pop()
        if expanded:
            code[v] = "(" + "".join(sorted(code[c] for c in g.adjacency[v] if c != parent)) + ")"
        else:
            stack.append((v, parent, True))
            for c in g.adjacency[v]:
                if c != parent:
                    stack.append((c, v, False))
    return code[root]


def canonical_tree_code(g: Graph) -> str:
    """AHU encoding rooted at the tree center; equal codes iff isomorphic."""
    if not _is_tree(g):
        raise ValueError("canonical_tree_code requires a tree")
    return min(_rooted_ahu(g, c) for c in _tree_centers(g))


def _wl_colors(g: Graph, rounds: int = 3) -> list[str]:
    colors = [str(g.degree(v)) for v in range(g.num_vertices)]
    for _ in range(rounds):
        sigs = [
            colors[v] + "|" + ",".join(sorted(colors[u] for u in g.adjacency[v]))
            for v in range(g.num_vertices)
        ]
        rename = {s: str(i) for i, s in enumerate(sorted(set(sigs)))}
        colors = [rename[s] for s in sigs]
    return colors


def canonical_adjacency_code(g: Graph) -> str:
    """Canonical adjacency bitstring for small graphs.

    Exact (minimum over all relabelings) up to 8 vertices. Larger graphs get
    a color-refinement signature instead, which is isomorphism-invariant but
    may collide for refinement-equivalent non-isomorphic graphs.
    """
    n = g.num_vertices
    if n <= 8:
        best: Optional[str] = None
        verts = list(range(n))
        for perm in itertools.permutations(verts):
            bits = []
            for i in range(n):
                row = ["1" if g.has_edge(perm[i], perm[j]) else "0" for j in range(i + 1, n)]
                bits.append("".join(row))
            s = "".join(bits)
            if best is None or s < best:
                best = s
        return f"g{n}:{best or ''}"
    hist: dict[str, int] = {}
    for c in _wl_colors(g):
        hist[c] = hist.get(c, 0) + 1
    sig = ";".join(f"{c}x{hist[c]}" for c in sorted(hist))
    return f"g{n}m{g.num_edges}:wl[{sig}]"


# ---------------------------------------------------------------------------
# family constructors


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(k: int) -> Graph:
    if k < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph(k, [(i, (i + 1) % k) for i in range(k)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def single_edge() -> Graph:
    return Graph(2, [(0, 1)])


def enumerate_trees(max_size: int) -> list[Pattern]:
    """All free trees with 2..max_size vertices, one per isomorphism class.

    Grown by leaf attachment with AHU deduplication. The single vertex is
    deliberately excluded from the catalog; use a custom pattern if the
    vertex count is wanted as a feature.
    """
    if max_size < 2:
        raise ValueError("max_size must be at least 2")
    if max_size > MAX_TREE_CATALOG_SIZE:
        raise ValueError(
            f"tree catalogs beyond size {MAX_TREE_CATALOG_SIZE} are not supported"
        )
    patterns: list[Pattern] = []
    current: dict[str, Graph] = {canonical_tree_code(single_edge()): single_edge()}
    for size in range(2, max_size + 1):
        for code in sorted(current):
            patterns.append(Pattern(current[code], "tree", size, code))
        if size == max_size:
            break
        grown: dict[str, Graph] = {}
        for tree in current.values():
            for attach in range(size):
                bigger = Graph(size + 1, list(tree.edges()) + [(attach, size)])
                code = canonical_tree_code(bigger)
                if code not in grown:
                    grown[code] = bigger
        current = grown
    return patterns


def enumerate_cycles(max_size: int) -> list[Pattern]:
    """The single-edge pattern followed by cycles C3..C_max_size.

    The edge pattern stands in for the length-2 closed-walk count (twice the
    edge count), which rounds the cycle catalog out to max_size - 1 columns.
    """
    if max_size < 3:
        raise ValueError("max_size must be at least 3")
    patterns = [Pattern(single_edge(), "path", 2, canonical_tree_code(single_edge()))]
    for k in range(3, max_size + 1):
        g = cycle_graph(k)
        patterns.append(Pattern(g, "cycle", k, canonical_adjacency_code(g)))
    return patterns


def enumerate_stars(max_size: int) -> list[Pattern]:
    """Stars S_1..S_{max_size-1} (sizes 2..max_size)."""
    if max_size < 2:
        raise ValueError("max_size must be at least 2")
    out = []
    for size in range(2, max_size + 1):
        g = star_graph(size - 1)
        out.append(Pattern(g, "star", size, canonical_tree_code(g)))
    return out


def enumerate_paths(max_size: int) -> list[Pattern]:
    """Paths P2..P_{max_size} (sizes 2..max_size)."""
    if max_size < 2:
        raise ValueError("max_size must be at least 2")
    out = []
    for size in range(2, max_size + 1):
        g = path_graph(size)
        out.append(Pattern(g, "path", size, canonical_tree_code(g)))
    return out


def custom_pattern(g: Graph) -> Pattern:
    return Pattern(g, "custom", g.num_vertices, canonical_adjacency_code(g))


# ---------------------------------------------------------------------------
# treewidth and nice decompositions


def treewidth_exact(g: Graph) -> tuple[int, list[int]]:
    """Optimal treewidth via dynamic programming over elimination prefixes.

    Returns (width, elimination_order) where the order achieves the width.
    Exponential in the vertex count; guarded at 20 vertices.
    """
    n = g.num_vertices
    if n > 20:
        raise ValueError("treewidth_exact is limited to 20 vertices")
    if n == 0:
        return -1, []
    adj = [0] * n
    for u in range(n):
        for v in g.adjacency[u]:
            adj[u] |= 1 << v

    def fill_degree(eliminated: int, v: int) -> int:
        # Vertices outside `eliminated` reachable from v through eliminated ones.
        comp = adj[v] & eliminated
        frontier = comp
        while frontier:
            grow = 0
            m = frontier
            while m:
                low = m & -m
                grow |= adj[low.bit_length() - 1]
                m ^= low
            frontier = (grow & eliminated) & ~comp
            comp |= frontier
        reach = adj[v]
        m = comp
        while m:
            low = m & -m
            reach |= adj[low.bit_length() - 1]
            m ^= low
        return bin(reach & ~eliminated & ~(1 << v)).count("1")

    full = (1 << n) - 1
    width = {0: -1}
    for s in range(1, full + 1):
        best = n
        m = s
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            prev = width[s ^ low]
            if prev >= best:
                continue
            cand = max(prev, fill_degree(s ^ low, v))
            if cand < best:
                best = cand
        width[s] = best

    order: list[int] = []
    s = full
    while s:
        m = s
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            if max(width[s ^ low], fill_degree(s ^ low, v)) == width[s]:
                order.append(v)
                s ^= low
                break
        else:
            raise AssertionError("failed to reconstruct elimination order")
    order.reverse()
    return width[full], order


def _elimination_bags(g: Graph, order: Sequence[int]) -> tuple[list[frozenset[int]], list[tuple[int, int]]]:
    """Decomposition bags from an elimination order, with fill-in edges."""
    n = g.num_vertices
    if sorted(order) != list(range(n)):
        raise ValueError("elimination order must be a permutation of the vertices")
    position = {v: i for i, v in enumerate(order)}
    neighbors = {v: set(g.adjacency[v]) for v in range(n)}
    bags: list[frozenset[int]] = []
    bag_of: dict[int, int] = {}
    for idx, v in enumerate(order):
        later = {u for u in neighbors[v] if position[u] > idx}
        bags.append(frozenset({v} | later))
        bag_of[v] = idx
        for a in later:
            neighbors[a].discard(v)
            for b in later:
                if a != b:
                    neighbors[a].add(b)
    # Each bag links to the bag of its first-eliminated later neighbor; bags
    # whose vertex had none (component ends) chain to the next bag so the
    # decomposition stays a single tree.
    edges: list[tuple[int, int]] = []
    for idx, v in enumerate(order):
        later = bags[idx] - {v}
        if later:
            first = min(later, key=lambda u: position[u])
            edges.append((idx, bag_of[first]))
        elif idx + 1 < len(bags):
            edges.append((idx, idx + 1))
    return bags, edges


class _NiceBuilder:
    def __init__(self):
        self.bags: list[frozenset[int]] = []
        self.kinds: list[str] = []
        self.edges: list[tuple[int, int]] = []

    def add(self, bag: frozenset[int], kind: str, children: Sequence[int] = ()) -> int:
        idx = len(self.bags)
        self.bags.append(bag)
        self.kinds.append(kind)
        for c in children:
            self.edges.append((idx, c))
        return idx

    def chain_up(self, node: int, source: frozenset[int], target: frozenset[int]) -> int:
        """Forget then introduce, one vertex per step, from source to target."""
        bag = source
        for v in sorted(source - target):
            bag = bag - {v}
            node = self.add(bag, "forget", [node])
        for v in sorted(target - source):
            bag = bag | {v}
            node = self.add(bag, "introduce", [node])
        return node

    def leaf_chain(self, target: frozenset[int]) -> int:
        node = self.add(frozenset(), "leaf")
        bag: frozenset[int] = frozenset()
        for v in sorted(target):
            bag = bag | {v}
            node = self.add(bag, "introduce", [node])
        return node


def build_nice_decomposition(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Nice tree decomposition of g from an elimination order.

    The root bag is empty, leaves have empty bags, and each vertex is
    forgotten exactly once on the path to the root.
    """
    n = g.num_vertices
    if n == 0:
        raise ValueError("cannot decompose the empty graph")
    bags, tree_edges = _elimination_bags(g, order)
    children: list[list[int]] = [[] for _ in bags]
    parent = [-1] * len(bags)
    adj: list[list[int]] = [[] for _ in bags]
    for a, b in tree_edges:
        adj[a].append(b)
        adj[b].append(a)
    root = len(bags) - 1
    seen = {root}
    stack = [root]
    topo = [root]
    while stack:
        t = stack.pop()
        for s in adj[t]:
            if s not in seen:
                seen.add(s)
                parent[s] = t
                children[t].append(s)
                stack.append(s)
                topo.append(s)

    nb = _NiceBuilder()
    built: dict[int, int] = {}
    for t in reversed(topo):
        bag = bags[t]
        if not children[t]:
            built[t] = nb.leaf_chain(bag)
            continue
        arms = []
        for c in children[t]:
            arms.append(nb.chain_up(built[c], bags[c], bag))
        node = arms[0]
        for arm in arms[1:]:
            node = nb.add(bag, "join", [node, arm])
        built[t] = node
    top = nb.chain_up(built[root], bags[root], frozenset())
    td = TreeDecomposition(
        tree=Graph(len(nb.bags), nb.edges),
        bags=tuple(nb.bags),
        width=max(len(b) for b in nb.bags) - 1,
        root=top,
        node_kind=tuple(nb.kinds),
    )
    validate_decomposition(td, g)
    return td


def validate_decomposition(td: TreeDecomposition, g: Graph) -> None:
    """Assert the three decomposition conditions plus nice-form structure."""
    cover = set()
    for bag in td.bags:
        cover |= bag
    if cover != set(range(g.num_vertices)):
        raise ValueError("bags do not cover every vertex")
    for u, v in g.edges():
        if not any(u in bag and v in bag for bag in td.bags):
            raise ValueError(f"edge ({u}, {v}) not contained in any bag")
    for v in range(g.num_vertices):
        nodes = {t for t, bag in enumerate(td.bags) if v in bag}
        start = next(iter(nodes))
        seen = {start}
        stack = [start]
        while stack:
            t = stack.pop()
            for s in td.tree.neighbors(t):
                if s in nodes and s not in seen:
                    seen.add(s)
                    stack.append(s)
        if seen != nodes:
            raise ValueError(f"bags containing vertex {v} are not connected")
    kids = td.children()
    for t, kind in enumerate(td.node_kind):
        bag, ch = td.bags[t], kids[t]
        if kind == "leaf":
            if ch or bag:
                raise ValueError("leaf nodes must have empty bags and no children")
        elif kind == "introduce":
            if len(ch) != 1 or len(bag - td.bags[ch[0]]) != 1 or not td.bags[ch[0]] <= bag:
                raise ValueError("introduce node must add exactly one vertex")
        elif kind == "forget":
            if len(ch) != 1 or len(td.bags[ch[0]] - bag) != 1 or not bag <= td.bags[ch[0]]:
                raise ValueError("forget node must drop exactly one vertex")
        elif kind == "join":
            if len(ch) != 2 or any(td.bags[c] != bag for c in ch):
                raise ValueError("join node needs two children with identical bags")
        else:
            raise ValueError(f"unknown node kind {kind!r}")
    if td.bags[td.root]:
        raise ValueError("root bag must be empty")
    if td.width != max(len(b) for b in td.bags) - 1:
        raise ValueError("stored width does not match bags")


@lru_cache(maxsize=512)
def nice_decomposition(pattern: Pattern) -> TreeDecomposition:
    """Cached nice decomposition of a pattern at its exact treewidth."""
    _, order = treewidth_exact(pattern.graph)
    return build_nice_decomposition(pattern.graph, order)


# ---------------------------------------------------------------------------
# external interfaces


def parse_pattern_blocks(text: str) -> list[Graph]:
    """Parse the custom pattern format: per block, `n` then `u v` edge lines."""
    graphs = []
    for block in text.split("\n\n"):
        lines = [ln.strip() for ln in block.splitlines() if ln.strip()]
        if not lines:
            continue
        try:
            n = int(lines[0])
            edges = []
            for ln in lines[1:]:
                u, v = ln.split()
                edges.append((int(u), int(v)))
        except ValueError as exc:
            raise ValueError(f"malformed pattern block: {exc}") from exc
        graphs.append(Graph(n, edges))
    return graphs


def load_pattern_file(path: str | Path) -> list[Graph]:
    return parse_pattern_blocks(Path(path).read_text())


def resolve_family(spec: str) -> list[Pattern]:
    """Parse a family spec like 'trees:6', 'cycles:8', 'stars:4', 'paths:5'.

    A bare file path loads custom patterns from the block format.
    """
    name, _, arg = spec.partition(":")
    name = name.lower()
    builders = {
        "trees": enumerate_trees,
        "cycles": enumerate_cycles,
        "stars": enumerate_stars,
        "paths": enumerate_paths,
    }
    if name in builders:
        if not arg:
            raise ValueError(f"family {name!r} needs a size, e.g. {name}:6")
        return builders[name](int(arg))
    if name == "file":
        return [custom_pattern(g) for g in load_pattern_file(arg)]
    raise ValueError(f"unknown pattern family {spec!r}")
