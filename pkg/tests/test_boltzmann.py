import math
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from structura.boltzmann import (
    ComponentMultiset,
    EmptyClassAtN,
    NotDecomposable,
    build_bp_model,
    core_of_bp,
    member_masks,
    multiset_keys,
    read_sample_log,
    row_multiset,
    sample_bp,
    sample_components,
    sparse_multiset_keys,
    sample_counts,
    sample_counts_split,
    sample_uniform,
    sample_uniform_masks,
    total_variation,
    write_sample_log,
)
from structura.canon import canonicalize
from structura.classes import GraphClass, builtin_class, connected, edgeless
from structura.graph import Graph, complete, path
from structura.series import eval_series, tree_series


def rng(seed=0):
    return np.random.Generator(np.random.PCG64(seed))


def four_sigma(p, n):
    return 4 * math.sqrt(p * (1 - p) / n)


class TestModel:
    def test_forest_weights(self, forests):
        m = build_bp_model(forests, 0.1, 6)
        assert m.mu[m.index(canonicalize(complete(1)))] == pytest.approx(0.1)
        assert m.mu[m.index(canonicalize(complete(2)))] == pytest.approx(0.005)
        assert all(x > 0 for x in m.mu)
        assert max(s.n for s in m.shapes) == 6

    def test_truncated_c_matches_series(self, forests):
        m = build_bp_model(forests, 0.1, 6)
        assert m.c_rho == pytest.approx(eval_series(tree_series(6), 0.1).value, abs=1e-15)
        assert m.tail.last_size_mu == pytest.approx(6 ** 4 * 0.1 ** 6 / math.factorial(6))

    def test_small_rho(self, planar):
        m = build_bp_model(planar, 1e-9, 5)
        assert m.p_empty == pytest.approx(1.0, abs=1e-8)

    def test_not_decomposable(self):
        with pytest.raises(NotDecomposable):
            build_bp_model(connected(), 0.1, 4)

    def test_exact_weights_are_rational(self, forests):
        m = build_bp_model(forests, 0.25, 4)
        assert m.mu_exact[0] == pytest.approx(0.25)
        assert float(sum(m.mu_exact)) == pytest.approx(m.c_rho)


class TestSampling:
    def test_empty_frequency(self, forests):
        m = build_bp_model(forests, 0.1, 6)
        counts = sample_counts(m, 200000, rng(1))
        p = m.p_empty
        freq = float((counts.sum(axis=1) == 0).mean())
        assert abs(freq - p) <= four_sigma(p, counts.shape[0])
        assert p == pytest.approx(0.8998, abs=1e-4)

    def test_k1_mean(self, forests):
        m = build_bp_model(forests, 0.1, 6)
        counts = sample_counts(m, 200000, rng(2))
        k1 = counts[:, m.index(canonicalize(complete(1)))]
        assert abs(k1.mean() - 0.1) <= 4 * math.sqrt(0.1 / k1.size)

    def test_everything_excluded(self):
        nothing = GraphClass("nothing", lambda g: g.n == 0, flags=builtin_class("forests").flags)
        m = build_bp_model(nothing, 0.3, 4)
        assert m.shapes == ()
        assert sample_bp(m, rng()).is_empty

    def test_independence(self, planar):
        m = build_bp_model(planar, 0.3, 4)
        counts = sample_counts(m, 200000, rng(3))
        a = counts[:, m.index(canonicalize(complete(1)))]
        b = counts[:, m.index(canonicalize(complete(2)))]
        cov = np.cov(a, b)[0, 1]
        assert abs(cov) <= 4 * a.std() * b.std() / math.sqrt(a.size)

    def test_single_structure_law(self, planar):
        m = build_bp_model(planar, 0.3, 4)
        n = 200000
        keys = Counter(multiset_keys(m, sample_counts(m, n, rng(4))))
        g_rho = m.g_rho
        targets = {
            (): 1.0,
            ((canonicalize(complete(1)).key, 1),): 0.3,
            ((canonicalize(complete(1)).key, 2),): 0.3 ** 2 / 2,
            ((canonicalize(complete(3)).key, 1),): 0.3 ** 3 / 6,
            ((canonicalize(path(3)).key, 1),): 0.3 ** 3 / 2,
            ((canonicalize(complete(4)).key, 1),): 0.3 ** 4 / 24,
        }
        for key, mu in targets.items():
            p = mu / g_rho
            assert abs(keys[key] / n - p) <= four_sigma(p, n), key

    def test_split_streams_reproducible(self, forests):
        m = build_bp_model(forests, 0.2, 5)
        a = sample_counts_split(m, 1001, seed=7, replicas=3)
        b = sample_counts_split(m, 1001, seed=7, replicas=3)
        assert a.shape == (1001, len(m.shapes))
        np.testing.assert_array_equal(a, b)

    def test_same_seed_same_samples(self, forests):
        m = build_bp_model(forests, 0.2, 5)
        np.testing.assert_array_equal(sample_counts(m, 500, rng(9)), sample_counts(m, 500, rng(9)))


class TestSparse:
    def test_same_law_as_dense(self, forests):
        m = build_bp_model(forests, 0.3, 5)
        n = 200000
        rows, shapes = sample_components(m, n, rng(12))
        empty = 1 - np.unique(rows).size / n
        assert abs(empty - m.p_empty) <= four_sigma(m.p_empty, n)
        k1 = np.bincount(rows[shapes == m.index(canonicalize(complete(1)))], minlength=n)
        assert abs(k1.mean() - 0.3) <= 4 * math.sqrt(0.3 / n)
        assert np.var(k1) == pytest.approx(0.3, rel=0.03)

    def test_keys_match_dense_path(self, planar):
        m = build_bp_model(planar, 0.25, 5)
        rows, shapes = sample_components(m, 400, rng(13))
        dense = np.zeros((400, len(m.shapes)), dtype=np.int64)
        np.add.at(dense, (rows, shapes), 1)
        assert sparse_multiset_keys(m, rows, shapes, 400, core=True) == multiset_keys(m, dense, core=True)
        assert sparse_multiset_keys(m, rows, shapes, 400) == multiset_keys(m, dense)

    def test_max_part_drops_large_parts(self, planar):
        m = build_bp_model(planar, 0.3, 5)
        rows, shapes = sample_components(m, 2000, rng(14))
        for key in sparse_multiset_keys(m, rows, shapes, 2000, core=True, max_part=3):
            assert all(part[0] <= 3 for part, _ in key)


class TestCore:
    def test_paths_vanish(self):
        p3 = canonicalize(path(3))
        assert core_of_bp(ComponentMultiset.from_map({p3: 2})).is_empty

    def test_triangle_with_pendant(self):
        g = Graph.from_edges(4, [(1, 2), (2, 3), (1, 3), (3, 4)])
        out = core_of_bp(ComponentMultiset.from_map({canonicalize(g): 1}))
        assert out.as_dict() == {canonicalize(complete(3)): 1}

    def test_graph_of_multiset(self):
        s = ComponentMultiset.from_map({canonicalize(complete(2)): 2, canonicalize(complete(1)): 1})
        assert s.graph().n == 5 and s.graph().num_edges == 2
        assert s.kappa(canonicalize(complete(2))) == 2

    def test_core_keys_agree_with_core_of_bp(self, planar):
        m = build_bp_model(planar, 0.25, 5)
        counts = sample_counts(m, 300, rng(5))
        fast = multiset_keys(m, counts, core=True)
        slow = [core_of_bp(row_multiset(m, r)).key for r in counts]
        assert fast == slow


class TestUniform:
    def test_edgeless(self):
        for s in range(5):
            assert sample_uniform(edgeless(), 5, rng(s)) == Graph.empty(5)

    def test_forests_three(self, forests):
        masks = sample_uniform_masks(forests, 3, 70000, rng(6))
        c = Counter(masks.tolist())
        assert len(c) == 7
        sd = math.sqrt(70000 * (1 / 7) * (6 / 7))
        assert all(abs(v - 10000) <= 4 * sd for v in c.values())

    def test_trees_four(self):
        trees = builtin_class("trees")
        n = 64000
        c = Counter(sample_uniform_masks(trees, 4, n, rng(7)).tolist())
        assert len(c) == 16
        assert all(abs(v / n - 1 / 16) <= four_sigma(1 / 16, n) for v in c.values())

    @pytest.mark.parametrize("name", ["forests", "trees", "planar", "outerplanar", "diamondFree", "connected", "all"])
    def test_chi_square_n4(self, name):
        c = builtin_class(name)
        pool = member_masks(c, 4)
        draws = sample_uniform_masks(c, 4, 40 * pool.size, rng(8))
        idx = np.searchsorted(pool, draws)
        obs = np.bincount(idx, minlength=pool.size)
        assert stats.chisquare(obs).pvalue > 0.001

    def test_samples_are_members(self, planar):
        for s in range(50):
            assert planar.member(sample_uniform(planar, 6, rng(s)))

    def test_empty_class(self):
        with pytest.raises(EmptyClassAtN):
            sample_uniform(builtin_class("minDegree2Of(planar)"), 2, rng())

    def test_null(self, forests):
        assert sample_uniform(forests, 0, rng()).n == 0
        with pytest.raises(EmptyClassAtN):
            sample_uniform(connected(), 0, rng())


class TestTV:
    def test_identical(self):
        assert total_variation([1, 2, 2], [2, 1, 2]) == 0

    def test_disjoint(self):
        assert total_variation([1, 1], [2]) == 1


def test_sample_log_round_trip(tmp_path, forests):
    m = build_bp_model(forests, 0.3, 4)
    counts = sample_counts(m, 20, rng(10))
    samples = [row_multiset(m, r) for r in counts]
    path_ = tmp_path / "log.jsonl"
    assert write_sample_log(path_, 10, m, samples) == 20
    recs = read_sample_log(path_)
    assert len(recs) == 20
    assert recs[0]["model"] == {"class": "forests", "rho": 0.3, "cutoff": 4}
    assert all(set(r) == {"seed", "model", "sample"} for r in recs)
    for r, s in zip(recs, samples):
        assert sum(e["count"] for e in r["sample"]) == sum(k for _, k in s.counts)
