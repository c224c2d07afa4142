"""Random forest: bagged Gini trees with per-node feature subsampling.

Each tree trains on a bootstrap resample (same size as the training set)
and considers ``ceil(sqrt(F))`` features at every split, drawn from a
per-tree seeded stream.  Prediction is a majority vote over trees, ties
resolved toward the lowest label; probabilities are vote fractions.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from .tree import DecisionTreeClassifier, TreeModel


def bootstrap_sample(n_samples: int, seed: int) -> np.ndarray:
    """Indices of a bootstrap resample: ``n_samples`` draws with
    replacement from ``range(n_samples)``, seeded."""
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")
    rng = np.random.default_rng(seed)
    return rng.integers(0, n_samples, size=n_samples, dtype=np.int64)


class RandomForestClassifier:
    """Ensemble of decision trees; stores one leaf label per tree node."""

    HYPERPARAMETERS = {
        "n_trees": 100,
        "bootstrap": True,
        "max_features": "sqrt",
        "max_depth": None,
        "min_samples_split": 2,
    }
    ACCEPTS_SINGLE_CLASS = True

    def __init__(self, trees: list[TreeModel], leaf_labels: list[np.ndarray], n_classes: int):
        self.trees = trees
        self.leaf_labels = leaf_labels
        self.n_classes = n_classes

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        codes: np.ndarray,
        n_classes: int,
        seed: int,
        *,
        n_trees: int = 100,
        bootstrap: bool = True,
        max_features: str | int = "sqrt",
        max_depth: int | None = None,
        min_samples_split: int = 2,
    ) -> "RandomForestClassifier":
        if n_trees < 1:
            raise ValueError("n_trees must be at least 1")
        n, n_feat = X.shape
        if max_features == "sqrt":
            per_split = math.isqrt(n_feat)
            if per_split * per_split < n_feat:
                per_split += 1  # ceil
        elif max_features == "all":
            per_split = n_feat
        else:
            per_split = int(max_features)
            if not 1 <= per_split <= n_feat:
                raise ValueError("max_features out of range")

        root = np.random.default_rng(seed)
        tree_seeds = root.integers(0, 2**63, size=(n_trees, 2))

        trees: list[TreeModel] = []
        leaf_labels: list[np.ndarray] = []
        for i in range(n_trees):
            if bootstrap:
                rows = bootstrap_sample(n, int(tree_seeds[i, 0]))
                Xi, yi = X[rows], codes[rows]
            else:
                Xi, yi = X, codes
            member = DecisionTreeClassifier.fit(
                Xi, yi, n_classes, seed=0,
                max_depth=max_depth, min_samples_split=min_samples_split,
                max_features=0 if per_split >= n_feat else per_split,
                feature_seed=int(tree_seeds[i, 1]),
            )
            trees.append(member.tree)
            leaf_labels.append(np.argmax(member.counts, axis=1).astype(np.int32))
        return cls(trees, leaf_labels, n_classes)

    def _votes(self, X: np.ndarray) -> np.ndarray:
        votes = np.zeros((X.shape[0], self.n_classes))
        rows = np.arange(X.shape[0])
        for tree, labels in zip(self.trees, self.leaf_labels):
            votes[rows, labels[tree.apply(X)]] += 1.0
        return votes

    def predict_codes(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self._votes(X), axis=1).astype(np.int64)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return self._votes(X) / len(self.trees)

    def to_state(self) -> dict[str, Any]:
        return {
            "trees": [
                {**tree.to_document(), "leaf_label": labels.tolist()}
                for tree, labels in zip(self.trees, self.leaf_labels)
            ],
        }

    @classmethod
    def from_state(cls, state: dict[str, Any], n_classes: int) -> "RandomForestClassifier":
        trees = [TreeModel.from_document(doc) for doc in state["trees"]]
        labels = [np.asarray(doc["leaf_label"], dtype=np.int32) for doc in state["trees"]]
        return cls(trees, labels, n_classes)
