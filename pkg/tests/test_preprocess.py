"""Standardization, discretization, and split/fold protocol."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from speedclass.errors import SchemaError
from speedclass.preprocess import (
    CLASS_WIDTH_KMH,
    N_CLASSES,
    SplitPlan,
    apply_standardizer,
    discretize_speed,
    fit_standardizer,
    make_split,
)


class TestStandardizer:
    def test_three_point_column_frozen_values(self):
        # mean 2, population std sqrt(2/3); z-scores +/- 1.224744871391589
        X = np.array([[1.0], [2.0], [3.0]])
        params = fit_standardizer(X)
        assert params.mean[0] == 2.0
        assert params.std_dev[0] == pytest.approx(math.sqrt(2.0 / 3.0), abs=1e-15)
        Z = apply_standardizer(params, X)
        np.testing.assert_allclose(
            Z[:, 0], [-1.224744871391589, 0.0, 1.224744871391589], atol=1e-15
        )

    def test_population_convention_is_default(self):
        X = np.array([[1.0], [2.0], [3.0], [4.0]])
        assert fit_standardizer(X).std_dev[0] == np.std(X[:, 0])  # ddof=0
        assert fit_standardizer(X, ddof=1).std_dev[0] == np.std(X[:, 0], ddof=1)

    def test_constant_column_maps_to_zeros(self):
        X = np.array([[5.0, 1.0], [5.0, 2.0], [5.0, 4.0]])
        params = fit_standardizer(X)
        Z = apply_standardizer(params, X)
        np.testing.assert_array_equal(Z[:, 0], 0.0)
        assert Z[:, 1].std() > 0

    def test_params_transfer_to_new_data(self):
        train = np.array([[0.0], [10.0]])
        params = fit_standardizer(train)  # mean 5, std 5
        Z = apply_standardizer(params, np.array([[20.0]]))
        assert Z[0, 0] == pytest.approx(3.0)

    def test_feature_count_mismatch_rejected(self):
        params = fit_standardizer(np.ones((3, 2)))
        with pytest.raises(ValueError, match="does not match"):
            apply_standardizer(params, np.ones((3, 5)))

    def test_empty_matrix_rejected(self):
        with pytest.raises(ValueError, match="nonempty"):
            fit_standardizer(np.empty((0, 3)))

    def test_single_row_with_sample_convention_is_zero_spread(self):
        params = fit_standardizer(np.array([[7.0, 1.0]]), ddof=1)
        np.testing.assert_array_equal(params.std_dev, [0.0, 0.0])
        Z = apply_standardizer(params, np.array([[7.0, 1.0]]))
        np.testing.assert_array_equal(Z, [[0.0, 0.0]])


class TestDiscretize:
    @pytest.mark.parametrize(
        "speed,expected",
        [
            (0.0, 0),
            (9.999, 0),
            (10.0, 1),
            (59.9, 5),
            (60.0, 6),
            (139.999, 13),
            (140.0, 14),
            (144.0, 14),
            (145.0, 14),  # clipped
            (151.0, 14),  # clipped
            (299.0, 14),  # clipped
        ],
    )
    def test_boundary_table(self, speed, expected):
        assert discretize_speed(np.array([speed]))[0] == expected

    def test_exhaustive_integer_agreement_with_floor_rule(self):
        v = np.arange(0, 145, dtype=float)
        np.testing.assert_array_equal(discretize_speed(v), np.floor(v / 10.0))

    def test_labels_are_int64_when_no_missing(self):
        out = discretize_speed(np.array([1.0, 2.0]))
        assert out.dtype == np.int64

    def test_nan_passes_through_for_lockstep_dropping(self):
        out = discretize_speed(np.array([15.0, np.nan]))
        assert out[0] == 1.0
        assert np.isnan(out[1])
        assert out.dtype == np.float64

    def test_negative_speed_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            discretize_speed(np.array([-0.1]))

    def test_infinite_speed_rejected(self):
        with pytest.raises(ValueError, match="non-finite"):
            discretize_speed(np.array([np.inf]))

    def test_class_constants(self):
        assert N_CLASSES == 15
        assert CLASS_WIDTH_KMH == 10.0


class TestMakeSplit:
    def test_100_samples_give_90_10_and_five_folds_of_18(self):
        plan = make_split(100, seed=1)
        assert plan.test_indices.shape[0] == 10
        assert plan.train_indices.shape[0] == 90
        assert [f.shape[0] for f in plan.folds] == [18, 18, 18, 18, 18]

    def test_103_samples_round_half_up_and_balanced_folds(self):
        plan = make_split(103, seed=1)
        assert plan.test_indices.shape[0] == 10  # round(10.3) = 10
        assert [f.shape[0] for f in plan.folds] == [19, 19, 19, 18, 18]

    def test_round_half_up_at_half(self):
        # 15 * 0.1 = 1.5 rounds up to 2
        plan = make_split(15, seed=0)
        assert plan.test_indices.shape[0] == 2

    def test_disjoint_and_covering(self):
        plan = make_split(57, seed=9)
        combined = np.concatenate([plan.train_indices, plan.test_indices])
        assert np.array_equal(np.sort(combined), np.arange(57))
        fold_cat = np.concatenate(plan.folds)
        assert np.array_equal(np.sort(fold_cat), np.sort(plan.train_indices))

    def test_folds_partition_train_in_order(self):
        plan = make_split(40, seed=3)
        np.testing.assert_array_equal(np.concatenate(plan.folds), plan.train_indices)

    def test_same_seed_same_plan(self):
        a, b = make_split(64, seed=7), make_split(64, seed=7)
        np.testing.assert_array_equal(a.train_indices, b.train_indices)
        np.testing.assert_array_equal(a.test_indices, b.test_indices)
        for fa, fb in zip(a.folds, b.folds):
            np.testing.assert_array_equal(fa, fb)

    def test_different_seed_different_shuffle(self):
        a, b = make_split(64, seed=7), make_split(64, seed=8)
        assert not np.array_equal(a.train_indices, b.train_indices)

    def test_minimum_test_size_is_one(self):
        plan = make_split(10, test_fraction=0.01, seed=0)
        assert plan.test_indices.shape[0] == 1

    def test_folds_kept_nonempty_for_large_fractions(self):
        plan = make_split(10, test_fraction=0.9, seed=0)
        assert plan.test_indices.shape[0] == 5  # clamped so 5 folds remain
        assert all(f.shape[0] == 1 for f in plan.folds)

    def test_too_few_samples_rejected(self):
        with pytest.raises(ValueError, match="at least 10"):
            make_split(9)

    def test_bad_fraction_rejected(self):
        with pytest.raises(ValueError, match="test_fraction"):
            make_split(100, test_fraction=1.0)

    def test_document_round_trip(self):
        plan = make_split(33, seed=5)
        back = SplitPlan.from_document(plan.to_document())
        assert back.seed == plan.seed and back.n_samples == plan.n_samples
        np.testing.assert_array_equal(back.train_indices, plan.train_indices)
        np.testing.assert_array_equal(back.test_indices, plan.test_indices)
        for fa, fb in zip(back.folds, plan.folds):
            np.testing.assert_array_equal(fa, fb)

    def test_malformed_document_rejected(self):
        with pytest.raises(SchemaError, match="malformed"):
            SplitPlan.from_document("{oops")
        with pytest.raises(SchemaError, match="required"):
            SplitPlan.from_document('{"seed": 1}')


@settings(max_examples=60, deadline=None)
@given(
    X=hnp.arrays(
        np.float64,
        st.tuples(st.integers(2, 30), st.integers(1, 6)),
        elements=st.floats(-1e6, 1e6, allow_nan=False),
    )
)
def test_standardization_property(X):
    params = fit_standardizer(X)
    Z = apply_standardizer(params, X)
    for j in range(X.shape[1]):
        col = X[:, j]
        if np.all(col == col[0]):
            # hard guarantee: constant columns report zero spread
            assert params.std_dev[j] == 0.0
        if params.std_dev[j] == 0.0:
            # zero-spread columns (constant, or variance underflow on
            # pathological scales) map to all-zeros
            np.testing.assert_array_equal(Z[:, j], 0.0)
        else:
            assert abs(Z[:, j].mean()) < 1e-9
            assert abs(Z[:, j].std() - 1.0) < 1e-9


@settings(max_examples=60, deadline=None)
@given(
    v=hnp.arrays(
        np.float64, st.integers(1, 50), elements=st.floats(0, 500, allow_nan=False)
    )
)
def test_discretize_monotone_and_bounded(v):
    out = discretize_speed(v)
    assert np.all(out >= 0) and np.all(out <= 14)
    order = np.argsort(v, kind="stable")
    assert np.all(np.diff(out[order]) >= 0)  # nondecreasing in speed


@settings(max_examples=60, deadline=None)
@given(n=st.integers(10, 400), seed=st.integers(0, 2**31 - 1))
def test_split_protocol_property(n, seed):
    plan = make_split(n, seed=seed)
    n_test = min(max(int(n * 0.1 + 0.5), 1), n - 5)
    assert plan.test_indices.shape[0] == n_test
    combined = np.concatenate([plan.train_indices, plan.test_indices])
    assert np.array_equal(np.sort(combined), np.arange(n))
    sizes = [f.shape[0] for f in plan.folds]
    assert len(sizes) == 5
    assert max(sizes) - min(sizes) <= 1
    assert sum(sizes) == n - n_test
