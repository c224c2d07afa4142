"""Tree-growing kernels: split optimality, structure, backend parity.

The compiled extension and the pure-Python fallback must produce
bit-identical trees; every numeric accumulation is ordered the same way
in both.  The parity suite below freezes that contract.
"""

import importlib

import numpy as np
import pytest

from speedclass import _kernels_py
from speedclass.kernels import KERNEL_BACKEND

try:
    _kernels_cy = importlib.import_module("speedclass._kernels")
    BACKENDS = [("python", _kernels_py), ("compiled", _kernels_cy)]
except ImportError:  # pragma: no cover - compiled extension not built
    _kernels_cy = None
    BACKENDS = [("python", _kernels_py)]

requires_compiled = pytest.mark.skipif(
    _kernels_cy is None, reason="compiled kernel extension not built"
)


def enumerate_best_gini(X, y, w, n_classes):
    """Brute-force minimal weighted-Gini split over all candidates.

    Returns the minimal score, or None if no feature admits a split.
    """
    n = X.shape[0]
    best = None
    for f in range(X.shape[1]):
        xs = np.sort(np.unique(X[:, f]))
        for lo, hi in zip(xs[:-1], xs[1:]):
            t = 0.5 * (lo + hi)
            left = X[:, f] <= t
            wl = w[left]
            wr = w[~left]
            score = 0.0
            for mask, wv in ((left, wl), (~left, wr)):
                tot = wv.sum()
                if tot == 0:
                    continue
                counts = np.bincount(y[mask], weights=w[mask], minlength=n_classes)
                gini = 1.0 - np.sum((counts / tot) ** 2)
                score += tot * gini
            score /= w.sum()
            if best is None or score < best:
                best = score
    return best


def gini_score_of_split(X, y, w, n_classes, feature, threshold):
    left = X[:, feature] <= threshold
    score = 0.0
    for mask in (left, ~left):
        tot = w[mask].sum()
        if tot == 0:
            continue
        counts = np.bincount(y[mask], weights=w[mask], minlength=n_classes)
        score += tot * (1.0 - np.sum((counts / tot) ** 2))
    return score / w.sum()


@pytest.mark.parametrize("name,backend", BACKENDS)
class TestClassificationTree:
    def test_frozen_four_point_split(self, name, backend):
        # enumeration oracle: thresholds 1.5/2.5/3.5 score 1/3, 0, 1/3
        X = np.array([[1.0], [2.0], [3.0], [4.0]])
        y = np.array([0, 0, 1, 1])
        w = np.ones(4)
        feature, threshold, left, right, counts, train_leaf = (
            backend.grow_tree_classification(X, y, w, 2)
        )
        assert feature[0] == 0
        assert threshold[0] == 2.5
        # both children are pure leaves
        assert feature[left[0]] == -1 and feature[right[0]] == -1
        np.testing.assert_array_equal(counts[left[0]], [2.0, 0.0])
        np.testing.assert_array_equal(counts[right[0]], [0.0, 2.0])

    def test_root_split_matches_enumeration_oracle(self, name, backend):
        rng = np.random.default_rng(42)
        for trial in range(20):
            n = int(rng.integers(5, 40))
            k = int(rng.integers(2, 5))
            X = rng.integers(0, 6, size=(n, 3)).astype(float)  # heavy ties
            y = rng.integers(0, k, size=n).astype(np.int64)
            w = rng.choice([0.5, 1.0, 2.0], size=n)
            feature, threshold, *_ = backend.grow_tree_classification(
                X, y, w, k, max_depth=1
            )
            best = enumerate_best_gini(X, y, w, k)
            if feature[0] == -1:
                assert best is None or best >= gini_score_of_split(
                    X, y, w, k, 0, np.inf
                ) - 1e-12  # no split can improve on the root
            else:
                got = gini_score_of_split(X, y, w, k, feature[0], threshold[0])
                assert got == pytest.approx(best, abs=1e-12)

    def test_tie_break_prefers_lower_feature_and_threshold(self, name, backend):
        # identical columns: both achieve score 0; feature 0 must win
        X = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0], [4.0, 4.0]])
        y = np.array([0, 0, 1, 1])
        feature, threshold, *_ = backend.grow_tree_classification(
            X, y, np.ones(4), 2, max_depth=1
        )
        assert feature[0] == 0
        assert threshold[0] == 2.5

    def test_pure_node_is_leaf(self, name, backend):
        X = np.array([[1.0], [2.0], [3.0]])
        y = np.array([1, 1, 1])
        feature, threshold, left, right, counts, train_leaf = (
            backend.grow_tree_classification(X, y, np.ones(3), 2)
        )
        assert feature.shape[0] == 1 and feature[0] == -1
        np.testing.assert_array_equal(train_leaf, [0, 0, 0])

    def test_constant_features_make_leaf(self, name, backend):
        X = np.full((6, 2), 3.0)
        y = np.array([0, 1, 0, 1, 0, 1])
        feature, *_ = backend.grow_tree_classification(X, y, np.ones(6), 2)
        assert feature.shape[0] == 1 and feature[0] == -1

    def test_max_depth_zero_gives_single_leaf(self, name, backend):
        X = np.arange(8, dtype=float).reshape(-1, 1)
        y = np.array([0, 1] * 4)
        feature, _, _, _, counts, train_leaf = backend.grow_tree_classification(
            X, y, np.ones(8), 2, max_depth=0
        )
        assert feature.shape[0] == 1 and feature[0] == -1
        np.testing.assert_array_equal(counts[0], [4.0, 4.0])

    def test_min_samples_split_respected(self, name, backend):
        X = np.arange(4, dtype=float).reshape(-1, 1)
        y = np.array([0, 1, 0, 1])
        feature, *_ = backend.grow_tree_classification(
            X, y, np.ones(4), 2, min_samples_split=5
        )
        assert feature.shape[0] == 1 and feature[0] == -1

    def test_train_leaf_matches_apply_tree(self, name, backend):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(60, 4))
        y = rng.integers(0, 3, size=60).astype(np.int64)
        feature, threshold, left, right, counts, train_leaf = (
            backend.grow_tree_classification(X, y, np.ones(60), 3)
        )
        np.testing.assert_array_equal(
            backend.apply_tree(feature, threshold, left, right, X), train_leaf
        )

    def test_unlimited_depth_fits_training_data_perfectly(self, name, backend):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(50, 3))
        y = rng.integers(0, 4, size=50).astype(np.int64)
        feature, threshold, left, right, counts, train_leaf = (
            backend.grow_tree_classification(X, y, np.ones(50), 4)
        )
        # distinct rows: every leaf must be single-class
        pred = np.argmax(counts[train_leaf], axis=1)
        np.testing.assert_array_equal(pred, y)

    def test_counts_sum_to_sample_weights(self, name, backend):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(30, 2))
        y = rng.integers(0, 3, size=30).astype(np.int64)
        w = rng.uniform(0.5, 2.0, size=30)
        _, _, _, _, counts, train_leaf = backend.grow_tree_classification(X, y, w, 3)
        # root counts equal total per-class weight
        expected = np.bincount(y, weights=w, minlength=3)
        np.testing.assert_allclose(counts[0], expected, atol=1e-12)
        # leaf counts sum to the weight routed there
        for leaf in np.unique(train_leaf):
            np.testing.assert_allclose(
                counts[leaf].sum(), w[train_leaf == leaf].sum(), atol=1e-12
            )

    def test_duplicated_row_equals_weight_two_at_root(self, name, backend):
        X1 = np.array([[1.0], [2.0], [3.0]])
        y1 = np.array([0, 1, 1])
        w1 = np.array([1.0, 2.0, 1.0])
        X2 = np.array([[1.0], [2.0], [2.0], [3.0]])
        y2 = np.array([0, 1, 1, 1])
        f1, t1, *_ = backend.grow_tree_classification(X1, y1, w1, 2, max_depth=1)
        f2, t2, *_ = backend.grow_tree_classification(
            X2, y2, np.ones(4), 2, max_depth=1
        )
        assert f1[0] == f2[0] and t1[0] == t2[0]

    def test_feature_seed_determinism(self, name, backend):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(40, 6))
        y = rng.integers(0, 3, size=40).astype(np.int64)
        w = np.ones(40)
        a = backend.grow_tree_classification(X, y, w, 3, max_features=2, feature_seed=99)
        b = backend.grow_tree_classification(X, y, w, 3, max_features=2, feature_seed=99)
        for xa, xb in zip(a, b):
            np.testing.assert_array_equal(xa, xb)

    def test_feature_subsampling_changes_trees(self, name, backend):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(80, 6))
        y = (X[:, 0] > 0).astype(np.int64)
        w = np.ones(80)
        roots = {
            int(
                backend.grow_tree_classification(
                    X, y, w, 2, max_features=1, feature_seed=s
                )[0][0]
            )
            for s in range(10)
        }
        assert len(roots) > 1  # different seeds draw different feature subsets


@pytest.mark.parametrize("name,backend", BACKENDS)
class TestRegressionTree:
    def test_leaf_values_are_node_means(self, name, backend):
        X = np.array([[1.0], [2.0], [3.0], [4.0]])
        t = np.array([1.0, 1.0, 5.0, 7.0])
        feature, threshold, left, right, value, train_leaf = (
            backend.grow_tree_regression(X, t, max_depth=1)
        )
        assert feature[0] == 0 and threshold[0] == 2.5
        assert value[left[0]] == pytest.approx(1.0)
        assert value[right[0]] == pytest.approx(6.0)
        assert value[0] == pytest.approx(t.mean())

    def test_unlimited_depth_memorizes_targets(self, name, backend):
        rng = np.random.default_rng(8)
        X = rng.normal(size=(40, 3))
        t = rng.normal(size=40)
        feature, threshold, left, right, value, train_leaf = (
            backend.grow_tree_regression(X, t)
        )
        np.testing.assert_allclose(value[train_leaf], t, atol=1e-12)

    def test_depth_limit_respected(self, name, backend):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(200, 3))
        t = rng.normal(size=200)
        feature, threshold, left, right, value, train_leaf = (
            backend.grow_tree_regression(X, t, max_depth=3)
        )

        depth = {0: 0}
        max_seen = 0
        for node in range(feature.shape[0]):
            if feature[node] >= 0:
                depth[int(left[node])] = depth[node] + 1
                depth[int(right[node])] = depth[node] + 1
                max_seen = max(max_seen, depth[node] + 1)
        assert max_seen <= 3

    def test_constant_target_is_single_leaf(self, name, backend):
        X = np.arange(10, dtype=float).reshape(-1, 1)
        t = np.full(10, 2.5)
        feature, _, _, _, value, _ = backend.grow_tree_regression(X, t)
        assert feature.shape[0] == 1
        assert value[0] == 2.5


@pytest.mark.parametrize("name,backend", BACKENDS)
class TestApplyTree:
    def test_left_branch_takes_equal_values(self, name, backend):
        # hand-built stump: x <= 2.0 goes left
        feature = np.array([0, -1, -1], dtype=np.int32)
        threshold = np.array([2.0, 0.0, 0.0])
        left = np.array([1, -1, -1], dtype=np.int32)
        right = np.array([2, -1, -1], dtype=np.int32)
        X = np.array([[1.9], [2.0], [2.1]])
        out = backend.apply_tree(feature, threshold, left, right, X)
        np.testing.assert_array_equal(out, [1, 1, 2])

    def test_single_leaf_tree_routes_everything_to_root(self, name, backend):
        feature = np.array([-1], dtype=np.int32)
        out = backend.apply_tree(
            feature, np.zeros(1), np.full(1, -1, np.int32), np.full(1, -1, np.int32),
            np.random.default_rng(0).normal(size=(5, 2)),
        )
        np.testing.assert_array_equal(out, [0, 0, 0, 0, 0])


@requires_compiled
class TestBackendParity:
    """The compiled and pure backends must agree bit for bit."""

    def test_selector_prefers_compiled(self, monkeypatch):
        assert KERNEL_BACKEND in ("compiled", "python")

    def test_classification_parity_randomized(self):
        rng = np.random.default_rng(1234)
        for trial in range(15):
            n = int(rng.integers(5, 120))
            n_feat = int(rng.integers(1, 6))
            k = int(rng.integers(2, 6))
            # integer grids maximize ties; mix in exact halves
            X = rng.integers(0, 5, size=(n, n_feat)) / 2.0
            y = rng.integers(0, k, size=n).astype(np.int64)
            w = rng.choice([0.25, 1.0, 1.5, 3.0], size=n)
            depth = int(rng.integers(-1, 6))
            mss = int(rng.integers(2, 6))
            mf = int(rng.integers(0, n_feat + 1))
            seed = int(rng.integers(0, 2**63))
            a = _kernels_py.grow_tree_classification(
                X, y, w, k, depth, mss, mf, seed
            )
            b = _kernels_cy.grow_tree_classification(
                X, y, w, k, depth, mss, mf, seed
            )
            for xa, xb in zip(a, b):
                np.testing.assert_array_equal(np.asarray(xa), np.asarray(xb))

    def test_regression_parity_randomized(self):
        rng = np.random.default_rng(888)
        for trial in range(10):
            n = int(rng.integers(5, 150))
            X = rng.integers(0, 6, size=(n, 3)).astype(float)
            t = np.round(rng.normal(size=n), 2)
            depth = int(rng.integers(-1, 5))
            a = _kernels_py.grow_tree_regression(X, t, depth, 2)
            b = _kernels_cy.grow_tree_regression(X, t, depth, 2)
            for xa, xb in zip(a, b):
                np.testing.assert_array_equal(np.asarray(xa), np.asarray(xb))

    def test_apply_parity(self):
        rng = np.random.default_rng(77)
        X = rng.normal(size=(300, 4))
        y = rng.integers(0, 3, size=300).astype(np.int64)
        tree = _kernels_py.grow_tree_classification(X, y, np.ones(300), 3)
        feature, threshold, left, right = tree[0], tree[1], tree[2], tree[3]
        Q = rng.normal(size=(500, 4))
        np.testing.assert_array_equal(
            _kernels_py.apply_tree(feature, threshold, left, right, Q),
            _kernels_cy.apply_tree(feature, threshold, left, right, Q),
        )
