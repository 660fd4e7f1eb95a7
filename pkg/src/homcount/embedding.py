"""Embedding pipeline: dataset bundle -> pattern-count matrix -> standardized features.

A column is a (pattern, encoder) pair; the cell for graph i holds the
homomorphism count of the pattern into graph i under that encoder. Column
order is a pure function of (family, encoder set), so matrices are stable
across runs and platforms.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .datasets import DatasetBundle
from .graphs import FeaturedGraph
from .hom import PhiFunction, hom
from .patterns import Pattern, resolve_family


@dataclass(frozen=True)
class ColumnMeta:
    pattern_index: int
    family: str
    size: int
    canonical_code: str
    phi: str
    density: bool
    promoted: bool


@dataclass
class EmbeddingMatrix:
    values: np.ndarray  # (num_graphs, num_columns) float64
    column_meta: list[ColumnMeta]

    def __post_init__(self):
        if self.values.ndim != 2:
            raise ValueError("embedding values must be a 2-d matrix")
        if self.values.shape[1] != len(self.column_meta):
            raise ValueError("column metadata must match the matrix width")
        if self.values.size and not np.isfinite(self.values).all():
            raise ValueError("embedding contains NaN or Inf entries")


@dataclass(frozen=True)
class ScalerParams:
    mean: np.ndarray
    stddev: np.ndarray  # zeros replaced by 1


def default_phi_set(bundle: DatasetBundle) -> list[PhiFunction]:
    """Constant encoder alone for plain graphs; plus one coordinate per
    feature column when the bundle carries vertex features."""
    if bundle.features is None:
        return [PhiFunction.constant_one()]
    p = bundle.features[0].shape[1] if bundle.features else 0
    return [PhiFunction.constant_one()] + [PhiFunction.coordinate(i) for i in range(p)]


def embed(
    bundle: DatasetBundle,
    family: Union[str, Sequence[Pattern]],
    phi_set: Optional[Sequence[PhiFunction]] = None,
    density: bool = False,
    log1p: bool = False,
    threads: int = 1,
) -> EmbeddingMatrix:
    """Embedding matrix with one column per (pattern, encoder) pair.

    `family` is a spec string like "trees:6" or "cycles:8", or an explicit
    pattern list. Encoders default to `default_phi_set(bundle)`.
    """
    patterns = resolve_family(family) if isinstance(family, str) else list(family)
    phis = list(phi_set) if phi_set is not None else default_phi_set(bundle)
    if not phis:
        raise ValueError("phi_set must not be empty")
    if bundle.features is None and any(p.kind == "coordinate" for p in phis):
        raise ValueError("coordinate encoders need a bundle with vertex features")

    targets: list = bundle.graphs
    if bundle.features is not None:
        targets = [
            FeaturedGraph.unchecked(g, f) for g, f in zip(bundle.graphs, bundle.features)
        ]

    columns = [(pi, phi) for pi in range(len(patterns)) for phi in phis]
    n, d = len(targets), len(columns)
    values = np.zeros((n, d), dtype=np.float64)
    promoted = [False] * d

    def fill_row(i: int) -> None:
        target = targets[i]
        ng = bundle.graphs[i].num_vertices
        for j, (pi, phi) in enumerate(columns):
            pat = patterns[pi]
            hv = hom(pat, target, phi=phi)
            cell = float(hv)
            if density:
                cell /= float(ng**pat.graph.num_vertices) if ng else 1.0
            if hv.promoted:
                promoted[j] = True
            values[i, j] = cell

    if threads > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill_row, range(n)))
    else:
        for i in range(n):
            fill_row(i)

    if log1p:
        values = np.log1p(values)
    meta = [
        ColumnMeta(
            pattern_index=pi,
            family=patterns[pi].family,
            size=patterns[pi].size,
            canonical_code=patterns[pi].canonical_code,
            phi=phi.label(),
            density=density,
            promoted=promoted[j],
        )
        for j, (pi, phi) in enumerate(columns)
    ]
    return EmbeddingMatrix(values=values, column_meta=meta)


def fit_standardizer(m: EmbeddingMatrix, rows: Optional[Sequence[int]] = None) -> ScalerParams:
    """Per-column mean and standard deviation over the given rows (all by default)."""
    data = m.values if rows is None else m.values[np.asarray(rows, dtype=np.intp)]
    if data.shape[0] == 0:
        raise ValueError("cannot fit a standardizer on an empty matrix")
    mean = data.mean(axis=0)
    std = data.std(axis=0)
    std = np.where(std > 0, std, 1.0)
    return ScalerParams(mean=mean, stddev=std)


def apply_standardizer(m: EmbeddingMatrix, params: ScalerParams) -> EmbeddingMatrix:
    return EmbeddingMatrix(
        values=(m.values - params.mean) / params.stddev,
        column_meta=m.column_meta,
    )


def column_names(m: EmbeddingMatrix) -> list[str]:
    names = []
    for c in m.column_meta:
        base = f"{c.family}{c.size}_{c.pattern_index}"
        if c.phi != "1":
            base += f"_{c.phi}"
        names.append(base)
    return names


def write_embedding_csv(
    m: EmbeddingMatrix,
    bundle: DatasetBundle,
    path: str | Path,
    config: Optional[dict] = None,
) -> None:
    """CSV with `graph_id,label,<columns>` plus a JSON sidecar of column
    metadata and the resolved run configuration."""
    path = Path(path)
    header = ["graph_id", "label"] + column_names(m)
    lines = [",".join(header)]
    for i in range(m.values.shape[0]):
        row = [str(i), str(bundle.labels[i])] + [repr(x) for x in m.values[i]]
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")
    sidecar = {
        "dataset": bundle.name,
        "columns": [asdict(c) for c in m.column_meta],
        "config": config or {},
    }
    path.with_suffix(path.suffix + ".meta.json").write_text(
        json.dumps(sidecar, indent=2) + "\n"
    )
