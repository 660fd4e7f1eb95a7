"""Dataset ingestion and synthetic generators.

Reads and writes the TU-Dortmund benchmark layout (`<name>_A.txt` and
friends) and generates three seeded synthetic classification datasets:
circular-skip-link graphs, bipartite-vs-Erdos-Renyi, and permuted copies of
the bundled 25-vertex strongly regular templates. All generators are
deterministic functions of their parameters and seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .graphs import Graph, is_bipartite, permute
from .hom import hom_cycle

DEFAULT_CSL_SKIPS = (2, 3, 4, 5, 6, 9, 11, 12, 13, 16)


class DataFormatError(ValueError):
    """Malformed dataset file; message carries file name and line number."""


@dataclass
class DatasetBundle:
    name: str
    graphs: list[Graph]
    labels: list[int]
    features: Optional[list[np.ndarray]] = None
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        validate_bundle(self)

    @property
    def num_classes(self) -> int:
        return max(self.labels) + 1 if self.labels else 0


def validate_bundle(bundle: DatasetBundle) -> None:
    if len(bundle.graphs) != len(bundle.labels):
        raise ValueError("graphs and labels must align")
    if bundle.features is not None:
        if len(bundle.features) != len(bundle.graphs):
            raise ValueError("features and graphs must align")
        for g, f in zip(bundle.graphs, bundle.features):
            if f.shape[0] != g.num_vertices:
                raise ValueError("feature rows must match vertex counts")
    if bundle.labels:
        classes = sorted(set(bundle.labels))
        if classes != list(range(len(classes))):
            raise ValueError("labels must form a contiguous 0-based range")


# ---------------------------------------------------------------------------
# TU-Dortmund format


def _read_lines(path: Path) -> list[str]:
    if not path.is_file():
        raise FileNotFoundError(f"missing dataset file: {path}")
    return path.read_text().splitlines()


def _int_token(token: str, path: Path, lineno: int) -> int:
    try:
        return int(token.strip())
    except ValueError:
        raise DataFormatError(
            f"{path.name}:{lineno}: expected an integer, got {token.strip()!r}"
        ) from None


def parse_tud(directory: str | Path, name: str) -> DatasetBundle:
    """Load a TU-format dataset: 1-based ids are shifted, edges symmetrized,
    node labels one-hot encoded, and graph labels remapped to 0..C-1."""
    directory = Path(directory)
    ind_path = directory / f"{name}_graph_indicator.txt"
    indicator = [
        _int_token(tok, ind_path, i + 1) for i, tok in enumerate(_read_lines(ind_path))
    ]
    num_graphs = max(indicator)
    sizes = [0] * num_graphs
    # Local index = rank within the vertex's own graph, so interleaved
    # indicator files parse correctly too.
    local_index = []
    vertex_graph = []
    for gid in indicator:
        vertex_graph.append(gid - 1)
        local_index.append(sizes[gid - 1])
        sizes[gid - 1] += 1

    a_path = directory / f"{name}_A.txt"
    edge_sets: list[set[tuple[int, int]]] = [set() for _ in range(num_graphs)]
    for lineno, line in enumerate(_read_lines(a_path), start=1):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise DataFormatError(f"{a_path.name}:{lineno}: expected 'u, v'")
        u = _int_token(parts[0], a_path, lineno) - 1
        v = _int_token(parts[1], a_path, lineno) - 1
        if not (0 <= u < len(indicator)) or not (0 <= v < len(indicator)):
            raise DataFormatError(f"{a_path.name}:{lineno}: vertex id out of range")
        gu, gv = vertex_graph[u], vertex_graph[v]
        if gu != gv:
            raise DataFormatError(
                f"{a_path.name}:{lineno}: edge crosses graph boundary ({u + 1}, {v + 1})"
            )
        lu, lv = local_index[u], local_index[v]
        if lu == lv:
            raise DataFormatError(f"{a_path.name}:{lineno}: self-loop on vertex {u + 1}")
        edge_sets[gu].add((min(lu, lv), max(lu, lv)))
    graphs = [Graph(sizes[i], sorted(edge_sets[i])) for i in range(num_graphs)]

    gl_path = directory / f"{name}_graph_labels.txt"
    raw_labels = [
        _int_token(tok, gl_path, i + 1) for i, tok in enumerate(_read_lines(gl_path))
    ]
    if len(raw_labels) != num_graphs:
        raise DataFormatError(f"{gl_path.name}: expected {num_graphs} labels")
    remap = {lab: i for i, lab in enumerate(sorted(set(raw_labels)))}
    labels = [remap[lab] for lab in raw_labels]

    features = None
    blocks: list[np.ndarray] = []
    nl_path = directory / f"{name}_node_labels.txt"
    if nl_path.is_file():
        node_labels = [
            _int_token(tok, nl_path, i + 1) for i, tok in enumerate(_read_lines(nl_path))
        ]
        if len(node_labels) != len(indicator):
            raise DataFormatError(f"{nl_path.name}: expected {len(indicator)} lines")
        values = sorted(set(node_labels))
        vmap = {v: i for i, v in enumerate(values)}
        onehot = np.zeros((len(indicator), len(values)))
        for i, lab in enumerate(node_labels):
            onehot[i, vmap[lab]] = 1.0
        blocks.append(onehot)
    na_path = directory / f"{name}_node_attributes.txt"
    if na_path.is_file():
        rows = []
        for lineno, line in enumerate(_read_lines(na_path), start=1):
            if not line.strip():
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError:
                raise DataFormatError(
                    f"{na_path.name}:{lineno}: expected comma-separated reals"
                ) from None
        attrs = np.asarray(rows, dtype=np.float64)
        if attrs.shape[0] != len(indicator):
            raise DataFormatError(f"{na_path.name}: expected {len(indicator)} rows")
        # Min-max scale each attribute into [0, 1]; constant columns go to 0.
        lo, hi = attrs.min(axis=0), attrs.max(axis=0)
        span = np.where(hi > lo, hi - lo, 1.0)
        blocks.append(np.where(hi > lo, (attrs - lo) / span, 0.0))
    if blocks:
        all_feats = np.hstack(blocks)
        rows_of = [np.flatnonzero(np.asarray(vertex_graph) == i) for i in range(num_graphs)]
        features = [all_feats[rows_of[i]].copy() for i in range(num_graphs)]

    return DatasetBundle(
        name=name,
        graphs=graphs,
        labels=labels,
        features=features,
        provenance={"source": "tud", "directory": str(directory)},
    )


def write_tud(bundle: DatasetBundle, directory: str | Path) -> None:
    """Emit a bundle in TU format. One-hot feature rows are written back as
    node labels so that a round trip reproduces them exactly."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    name = bundle.name
    a_lines, ind_lines = [], []
    offset = 0
    for i, g in enumerate(bundle.graphs):
        for v in range(g.num_vertices):
            ind_lines.append(str(i + 1))
        for u, v in g.edges():
            a_lines.append(f"{offset + u + 1}, {offset + v + 1}")
            a_lines.append(f"{offset + v + 1}, {offset + u + 1}")
        offset += g.num_vertices
    (directory / f"{name}_A.txt").write_text("\n".join(a_lines) + "\n")
    (directory / f"{name}_graph_indicator.txt").write_text("\n".join(ind_lines) + "\n")
    (directory / f"{name}_graph_labels.txt").write_text(
        "\n".join(str(lab) for lab in bundle.labels) + "\n"
    )
    if bundle.features is not None:
        stacked = np.vstack(bundle.features) if bundle.features else np.zeros((0, 0))
        is_onehot = (
            stacked.size > 0
            and np.isin(stacked, (0.0, 1.0)).all()
            and np.all(stacked.sum(axis=1) == 1.0)
        )
        if is_onehot:
            lines = [str(int(row.argmax())) for row in stacked]
            (directory / f"{name}_node_labels.txt").write_text("\n".join(lines) + "\n")
        else:
            lines = [",".join(repr(x) for x in row) for row in stacked]
            (directory / f"{name}_node_attributes.txt").write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# synthetic generators


def csl_template(num_vertices: int, skip: int) -> Graph:
    """Cycle 0..n-1 plus chords {i, i+skip mod n}; must come out 4-regular."""
    n = num_vertices
    if skip < 2 or 2 * skip >= n:
        raise ValueError(f"skip {skip} must satisfy 2 <= skip < n/2")
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(i, (i + skip) % n) for i in range(n)]
    g = Graph(n, edges)
    if any(g.degree(v) != 4 for v in range(n)):
        raise ValueError(f"skip {skip} does not produce a 4-regular graph on {n} vertices")
    return g


def _cycle_profile(g: Graph, max_k: int = 8) -> tuple[int, ...]:
    return tuple(int(hom_cycle(k, g).value) for k in range(2, max_k + 1))


def gen_csl(
    num_vertices: int = 41,
    skips: Sequence[int] = DEFAULT_CSL_SKIPS,
    copies_per_class: int = 15,
    seed: int = 0,
) -> DatasetBundle:
    """Circular-skip-link dataset: one class per skip length.

    Every graph is 4-regular, so tree-pattern counts cannot separate the
    classes; closed-walk profiles up to length 8 can, and the skip set is
    validated to have pairwise distinct profiles at generation time.
    """
    templates = [csl_template(num_vertices, r) for r in skips]
    profiles = [_cycle_profile(t) for t in templates]
    for i in range(len(skips)):
        for j in range(i + 1, len(skips)):
            if profiles[i] == profiles[j]:
                raise ValueError(
                    f"skips {skips[i]} and {skips[j]} have identical cycle profiles"
                )
    rng = random.Random(seed)
    graphs, labels = [], []
    for cls, template in enumerate(templates):
        for _ in range(copies_per_class):
            sigma = list(range(num_vertices))
            rng.shuffle(sigma)
            graphs.append(permute(template, sigma))
            labels.append(cls)
    return DatasetBundle(
        name="CSL",
        graphs=graphs,
        labels=labels,
        provenance={"source": "generated", "kind": "csl", "seed": seed},
    )


def _random_graph(n: int, p: float, rng: random.Random) -> Graph:
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return Graph(n, edges)


def gen_bipartite_er(
    total: int = 200,
    n_range: tuple[int, int] = (40, 100),
    p_bipartite: float = 0.2,
    p_er: float = 0.1,
    seed: int = 0,
) -> DatasetBundle:
    """Half random bipartite graphs (class 0), half Erdos-Renyi (class 1).

    Bipartite graphs split the vertices as evenly as possible and include
    each cross pair with probability p_bipartite. Erdos-Renyi samples that
    happen to be bipartite are rejected and redrawn so class labels stay
    truthful.
    """
    rng = random.Random(seed)
    lo, hi = n_range
    graphs, labels = [], []
    for _ in range(total // 2):
        n = rng.randint(lo, hi)
        left = (n + 1) // 2
        edges = [
            (u, v)
            for u in range(left)
            for v in range(left, n)
            if rng.random() < p_bipartite
        ]
        graphs.append(Graph(n, edges))
        labels.append(0)
    for _ in range(total - total // 2):
        n = rng.randint(lo, hi)
        g = _random_graph(n, p_er, rng)
        while is_bipartite(g):
            g = _random_graph(n, p_er, rng)
        graphs.append(g)
        labels.append(1)
    return DatasetBundle(
        name="BIPARTITE",
        graphs=graphs,
        labels=labels,
        provenance={"source": "generated", "kind": "bipartite_er", "seed": seed},
    )


def default_paulus_file() -> Path:
    return Path(str(resources.files("homcount").joinpath("data/paulus25.txt")))


def load_paulus(
    file: Optional[str | Path] = None,
    copies_per_class: int = 15,
    seed: int = 0,
) -> DatasetBundle:
    """Permuted copies of the bundled strongly regular 25-vertex templates.

    The fixture holds 14 pairwise non-isomorphic 12-regular cospectral
    graphs; each is replicated under seeded random relabelings, giving a
    14-class dataset that degree- and spectrum-based embeddings cannot
    separate.
    """
    path = Path(file) if file is not None else default_paulus_file()
    templates = []
    for block in path.read_text().split("\n\n"):
        lines = [ln.strip() for ln in block.splitlines() if ln.strip()]
        if not lines:
            continue
        n = len(lines)
        if n != 25 or any(len(ln) != 25 for ln in lines):
            raise ValueError(f"{path.name}: template must be a 25x25 0/1 matrix")
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                if lines[u][v] not in "01" or lines[u][v] != lines[v][u]:
                    raise ValueError(f"{path.name}: template matrix must be symmetric 0/1")
                if lines[u][v] == "1":
                    edges.append((u, v))
        g = Graph(n, edges)
        if any(g.degree(v) != 12 for v in range(n)):
            raise ValueError(f"{path.name}: template is not 12-regular")
        templates.append(g)
    rng = random.Random(seed)
    graphs, labels = [], []
    for cls, template in enumerate(templates):
        for _ in range(copies_per_class):
            sigma = list(range(25))
            rng.shuffle(sigma)
            graphs.append(permute(template, sigma))
            labels.append(cls)
    return DatasetBundle(
        name="PAULUS25",
        graphs=graphs,
        labels=labels,
        provenance={"source": "generated", "kind": "paulus", "seed": seed, "file": str(path)},
    )


def find_tud_name(directory: str | Path) -> str:
    """Infer the dataset name from the single `<name>_A.txt` in a directory."""
    matches = sorted(Path(directory).glob("*_A.txt"))
    if len(matches) != 1:
        raise ValueError(
            f"expected exactly one *_A.txt under {directory}, found {len(matches)}"
        )
    return matches[0].name[: -len("_A.txt")]
