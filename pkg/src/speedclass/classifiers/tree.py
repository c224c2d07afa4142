"""Gini-criterion decision tree classifier.

Splits are axis-aligned thresholds at midpoints between consecutive
distinct sorted feature values; the candidate minimizing the weighted
child Gini impurity wins, with ties resolved toward the lower feature
index and then the lower threshold.  Nodes stop splitting when pure,
smaller than ``min_samples_split``, at ``max_depth``, or when every
candidate feature is constant.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .. import kernels
from ..errors import DegenerateDataError


def gini_impurity(label_counts: np.ndarray) -> float:
    """Gini impurity ``1 - sum(p_k^2)`` of a label count vector.

    Args:
        label_counts: Non-negative counts (or weights) per label.

    Returns:
        Impurity in ``[0, 1 - 1/K]``; 0 for a pure node.

    Raises:
        ValueError: If counts are negative or sum to zero.
    """
    counts = np.asarray(label_counts, dtype=np.float64)
    if counts.size == 0 or counts.sum() <= 0.0:
        raise ValueError("label counts must contain at least one sample")
    if (counts < 0).any():
        raise ValueError("label counts must be non-negative")
    p = counts / counts.sum()
    return float(1.0 - np.sum(p * p))


def find_best_split(
    features: np.ndarray,
    labels: np.ndarray,
    sample_weight: np.ndarray | None = None,
) -> tuple[int, float] | None:
    """Exhaustive best split of one node's samples.

    Args:
        features: ``(n, F)`` feature matrix, finite values.
        labels: ``(n,)`` integer labels with at least two distinct values.
        sample_weight: Optional positive per-sample weights.

    Returns:
        ``(feature_index, threshold)`` of the split minimizing the
        weighted child Gini impurity (samples with value <= threshold go
        left), or ``None`` when no feature admits a valid split.
    """
    X = np.ascontiguousarray(features, dtype=np.float64)
    y = np.asarray(labels)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError("features must be (n, F) with one label per row")
    if X.shape[0] < 2:
        raise ValueError("need at least two samples to split")
    codes = np.searchsorted(np.unique(y), y).astype(np.int32)
    n_classes = int(codes.max()) + 1
    if n_classes < 2:
        raise ValueError("need at least two distinct labels to split")
    w = np.ones(X.shape[0]) if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)

    feature, threshold, *_ = kernels.grow_tree_classification(
        X, codes, w, n_classes, max_depth=1, min_samples_split=2,
        max_features=0, feature_seed=0,
    )
    if feature[0] < 0:
        return None
    return int(feature[0]), float(threshold[0])


class TreeModel:
    """Flat-array binary tree shared by every tree-based family."""

    __slots__ = ("feature", "threshold", "left", "right")

    def __init__(self, feature, threshold, left, right):
        self.feature = np.asarray(feature, dtype=np.int32)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int32)
        self.right = np.asarray(right, dtype=np.int32)

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf node id for every row of ``X``."""
        return kernels.apply_tree(self.feature, self.threshold, self.left, self.right, X)

    def to_document(self) -> dict[str, Any]:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
        }

    @classmethod
    def from_document(cls, doc: dict[str, Any]) -> "TreeModel":
        return cls(doc["feature"], doc["threshold"], doc["left"], doc["right"])


class DecisionTreeClassifier:
    """Single decision tree; keeps per-leaf class weight distributions."""

    HYPERPARAMETERS = {"max_depth": None, "min_samples_split": 2}
    ACCEPTS_SINGLE_CLASS = True

    def __init__(self, tree: TreeModel, counts: np.ndarray):
        self.tree = tree
        self.counts = np.asarray(counts, dtype=np.float64)

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        codes: np.ndarray,
        n_classes: int,
        seed: int,
        *,
        max_depth: int | None = None,
        min_samples_split: int = 2,
        sample_weight: np.ndarray | None = None,
        max_features: int = 0,
        feature_seed: int = 0,
    ) -> "DecisionTreeClassifier":
        if min_samples_split < 2:
            raise DegenerateDataError("min_samples_split must be at least 2")
        w = np.ones(X.shape[0]) if sample_weight is None else sample_weight
        feature, threshold, left, right, counts, _ = kernels.grow_tree_classification(
            X, codes.astype(np.int32), w, n_classes,
            max_depth=-1 if max_depth is None else int(max_depth),
            min_samples_split=int(min_samples_split),
            max_features=int(max_features), feature_seed=int(feature_seed),
        )
        return cls(TreeModel(feature, threshold, left, right), counts)

    def predict_codes(self, X: np.ndarray) -> np.ndarray:
        leaves = self.tree.apply(X)
        return np.argmax(self.counts[leaves], axis=1).astype(np.int64)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        leaves = self.tree.apply(X)
        dist = self.counts[leaves]
        return dist / dist.sum(axis=1, keepdims=True)

    def to_state(self) -> dict[str, Any]:
        return {"tree": self.tree.to_document(), "counts": self.counts.tolist()}

    @classmethod
    def from_state(cls, state: dict[str, Any], n_classes: int) -> "DecisionTreeClassifier":
        return cls(TreeModel.from_document(state["tree"]), np.asarray(state["counts"]))
