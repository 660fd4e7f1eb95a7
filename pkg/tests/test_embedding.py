import json
import random

import numpy as np
import pytest

from homcount.datasets import DatasetBundle, gen_csl, parse_tud
from homcount.embedding import (
    EmbeddingMatrix,
    apply_standardizer,
    column_names,
    default_phi_set,
    embed,
    fit_standardizer,
    write_embedding_csv,
)
from homcount.graphs import Graph, degree_sequence, disjoint_union, permute
from homcount.hom import PhiFunction
from conftest import FIXTURES


def small_bundle():
    graphs = [
        Graph(3, [(0, 1), (1, 2), (2, 0)]),
        Graph(4, [(0, 1), (1, 2), (2, 3)]),
        Graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)]),
        Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
    ]
    return DatasetBundle(name="small", graphs=graphs, labels=[0, 1, 0, 1])


class TestDimensions:
    def test_tree_six_gives_thirteen_columns(self):
        m = embed(small_bundle(), "trees:6")
        assert m.values.shape == (4, 13)

    def test_cycle_eight_gives_seven_columns(self):
        m = embed(small_bundle(), "cycles:8")
        assert m.values.shape == (4, 7)

    def test_phi_set_multiplies_columns(self):
        bundle = parse_tud(FIXTURES / "TOY", "TOY")
        m = embed(bundle, "trees:4")  # 4 patterns x (1 + 3 coordinates)
        assert m.values.shape == (2, 4 * 4)


class TestInvarianceAndSeparation:
    def test_csl_rows_class_constant_and_distinct(self):
        bundle = gen_csl(copies_per_class=2, seed=0)
        m = embed(bundle, "cycles:8")
        rows = {}
        for row, lab in zip(m.values, bundle.labels):
            key = tuple(row)
            rows.setdefault(lab, set()).add(key)
        assert all(len(v) == 1 for v in rows.values())
        all_rows = {next(iter(v)) for v in rows.values()}
        assert len(all_rows) == 10

    def test_permuted_bundle_identical_matrix(self):
        rng = random.Random(71)
        bundle = small_bundle()
        permuted = []
        for g in bundle.graphs:
            sigma = list(range(g.num_vertices))
            rng.shuffle(sigma)
            permuted.append(permute(g, sigma))
        other = DatasetBundle(name="small", graphs=permuted, labels=bundle.labels)
        a = embed(bundle, "trees:5")
        b = embed(other, "trees:5")
        assert np.array_equal(a.values, b.values)

    def test_equal_degree_sequences_do_not_pin_tree_columns(self):
        # same degree multiset, star columns agree, a path column differs
        g1 = disjoint_union(Graph(3, [(0, 1), (1, 2)]), Graph(3, [(0, 1), (1, 2)]))
        g2 = disjoint_union(Graph(4, [(0, 1), (1, 2), (2, 3)]), Graph(2, [(0, 1)]))
        assert degree_sequence(g1) == degree_sequence(g2)
        bundle = DatasetBundle(name="pair", graphs=[g1, g2], labels=[0, 1])
        stars = embed(bundle, "stars:3")
        assert np.array_equal(stars.values[0], stars.values[1])
        trees = embed(bundle, "trees:4")
        assert not np.array_equal(trees.values[0], trees.values[1])


class TestOptions:
    def test_density_bounds(self):
        m = embed(small_bundle(), "trees:5", density=True)
        assert (m.values >= 0).all() and (m.values <= 1).all()
        assert all(c.density for c in m.column_meta)

    def test_log1p(self):
        plain = embed(small_bundle(), "trees:4")
        logged = embed(small_bundle(), "trees:4", log1p=True)
        assert np.allclose(logged.values, np.log1p(plain.values))

    def test_threads_do_not_change_values(self):
        a = embed(small_bundle(), "trees:6", threads=1)
        b = embed(small_bundle(), "trees:6", threads=3)
        assert np.array_equal(a.values, b.values)

    def test_column_order_stable(self):
        a = embed(small_bundle(), "cycles:8")
        b = embed(small_bundle(), "cycles:8")
        assert a.column_meta == b.column_meta
        assert np.array_equal(a.values, b.values)

    def test_coordinate_phi_without_features_rejected(self):
        with pytest.raises(ValueError, match="features"):
            embed(small_bundle(), "trees:4", phi_set=[PhiFunction.coordinate(0)])

    def test_empty_phi_set_rejected(self):
        with pytest.raises(ValueError, match="phi_set"):
            embed(small_bundle(), "trees:4", phi_set=[])

    def test_default_phi_for_featured_bundle(self):
        bundle = parse_tud(FIXTURES / "TOY", "TOY")
        phis = default_phi_set(bundle)
        assert [p.kind for p in phis] == ["constant_one"] + ["coordinate"] * 3


class TestStandardizer:
    def test_constant_column_zeroed(self):
        values = np.array([[1.0, 2.0], [1.0, 4.0], [1.0, 6.0]])
        m = EmbeddingMatrix(values=values, column_meta=_meta(2))
        params = fit_standardizer(m)
        assert params.stddev[0] == 1.0
        out = apply_standardizer(m, params)
        assert (out.values[:, 0] == 0).all()

    def test_fit_apply_centers(self):
        rng = np.random.default_rng(5)
        values = rng.uniform(0, 10, size=(20, 4))
        m = EmbeddingMatrix(values=values, column_meta=_meta(4))
        out = apply_standardizer(m, fit_standardizer(m))
        assert np.abs(out.values.mean(axis=0)).max() < 1e-9
        assert np.allclose(out.values.std(axis=0), 1.0)

    def test_fit_on_rows_only(self):
        values = np.arange(12, dtype=float).reshape(6, 2)
        m = EmbeddingMatrix(values=values, column_meta=_meta(2))
        params = fit_standardizer(m, rows=[0, 1, 2])
        assert np.allclose(params.mean, values[:3].mean(axis=0))

    def test_empty_rejected(self):
        m = EmbeddingMatrix(values=np.zeros((0, 2)), column_meta=_meta(2))
        with pytest.raises(ValueError, match="empty"):
            fit_standardizer(m)

    def test_nan_rejected_at_construction(self):
        with pytest.raises(ValueError, match="NaN"):
            EmbeddingMatrix(values=np.array([[np.nan]]), column_meta=_meta(1))


class TestCsvOutput:
    def test_csv_and_sidecar(self, tmp_path):
        bundle = small_bundle()
        m = embed(bundle, "cycles:8")
        out = tmp_path / "emb.csv"
        write_embedding_csv(m, bundle, out, config={"family": "cycles:8", "seed": 0})
        lines = out.read_text().splitlines()
        assert lines[0].startswith("graph_id,label,")
        assert len(lines) == 1 + 4
        sidecar = json.loads((tmp_path / "emb.csv.meta.json").read_text())
        assert sidecar["config"]["seed"] == 0
        assert len(sidecar["columns"]) == 7
        assert len(column_names(m)) == 7


def _meta(d):
    from homcount.embedding import ColumnMeta

    return [
        ColumnMeta(
            pattern_index=i,
            family="tree",
            size=2,
            canonical_code="",
            phi="1",
            density=False,
            promoted=False,
        )
        for i in range(d)
    ]
