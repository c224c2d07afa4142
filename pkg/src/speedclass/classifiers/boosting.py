"""Boosted ensembles: multiclass AdaBoost stumps and gradient boosting.

AdaBoost fits depth-1 trees on reweighted samples; each round's vote
weight is ``ln((1-err)/err) + ln(K-1)``, which stays positive while the
weak learner beats random guessing on ``K`` classes.  A perfect round is
capped at ``ln(1e12)`` and ends training.  A round no better than random
triggers one weighted-bootstrap retry; if that also fails, boosting stops
with whatever rounds it has and records a diagnostic note.

Gradient boosting minimizes the multinomial log-loss: scores start at the
class-prior log-odds and every stage adds one depth-3 regression tree per
class fitted to the probability residuals, with leaf values given by the
``(K-1)/K``-scaled one-step Newton update.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from .. import kernels
from ..errors import DegenerateDataError
from .tree import TreeModel

ALPHA_CAP = math.log(1e12)  # vote weight of an error-free round
_NEWTON_EPS = 1e-150  # guards the Newton denominator for empty-ish leaves


class AdaBoostClassifier:
    """Weighted-vote ensemble of decision stumps."""

    HYPERPARAMETERS = {"n_estimators": 50}
    ACCEPTS_SINGLE_CLASS = False

    def __init__(
        self,
        stumps: list[TreeModel],
        leaf_labels: list[np.ndarray],
        alphas: np.ndarray,
        n_classes: int,
        note: str | None = None,
    ):
        self.stumps = stumps
        self.leaf_labels = leaf_labels
        self.alphas = np.asarray(alphas, dtype=np.float64)
        self.n_classes = n_classes
        self.note = note

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        codes: np.ndarray,
        n_classes: int,
        seed: int,
        *,
        n_estimators: int = 50,
    ) -> "AdaBoostClassifier":
        if n_estimators < 1:
            raise ValueError("n_estimators must be at least 1")
        n = X.shape[0]
        y32 = codes.astype(np.int32)
        rng = np.random.default_rng(seed)
        random_error = (n_classes - 1) / n_classes

        weights = np.full(n, 1.0 / n)
        stumps: list[TreeModel] = []
        leaf_labels: list[np.ndarray] = []
        alphas: list[float] = []
        note = None

        for _ in range(n_estimators):
            stump, labels, train_pred = cls._fit_stump(X, y32, weights, n_classes)
            error = float(weights[train_pred != codes].sum())

            if error >= random_error:
                # one retry on a weighted bootstrap resample
                rows = rng.choice(n, size=n, replace=True, p=weights)
                stump, labels, _ = cls._fit_stump(
                    X[rows], y32[rows], np.full(n, 1.0 / n), n_classes
                )
                train_pred = labels[
                    kernels.apply_tree(stump.feature, stump.threshold, stump.left, stump.right, X)
                ]
                error = float(weights[train_pred != codes].sum())
                if error >= random_error:
                    if not stumps:
                        raise DegenerateDataError(
                            "boosting failed: no stump beats random guessing"
                        )
                    note = (
                        f"stopped after {len(stumps)} rounds: weighted error "
                        f"{error:.4f} reached the random-guessing bound {random_error:.4f}"
                    )
                    break

            if error == 0.0:
                stumps.append(stump)
                leaf_labels.append(labels)
                alphas.append(ALPHA_CAP)
                break

            alpha = math.log((1.0 - error) / error) + math.log(n_classes - 1)
            stumps.append(stump)
            leaf_labels.append(labels)
            alphas.append(alpha)

            weights = weights * np.exp(alpha * (train_pred != codes))
            weights /= weights.sum()

        return cls(stumps, leaf_labels, np.asarray(alphas), n_classes, note)

    @staticmethod
    def _fit_stump(X, y32, weights, n_classes):
        feature, threshold, left, right, counts, train_leaf = kernels.grow_tree_classification(
            X, y32, weights, n_classes, max_depth=1, min_samples_split=2,
            max_features=0, feature_seed=0,
        )
        stump = TreeModel(feature, threshold, left, right)
        labels = np.argmax(counts, axis=1).astype(np.int64)
        return stump, labels, labels[train_leaf]

    def _votes(self, X: np.ndarray) -> np.ndarray:
        votes = np.zeros((X.shape[0], self.n_classes))
        rows = np.arange(X.shape[0])
        for stump, labels, alpha in zip(self.stumps, self.leaf_labels, self.alphas):
            votes[rows, labels[stump.apply(X)]] += alpha
        return votes

    def predict_codes(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self._votes(X), axis=1).astype(np.int64)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return self._votes(X) / self.alphas.sum()

    def to_state(self) -> dict[str, Any]:
        return {
            "stumps": [
                {**stump.to_document(), "leaf_label": labels.tolist()}
                for stump, labels in zip(self.stumps, self.leaf_labels)
            ],
            "alphas": self.alphas.tolist(),
            "note": self.note,
        }

    @classmethod
    def from_state(cls, state: dict[str, Any], n_classes: int) -> "AdaBoostClassifier":
        stumps = [TreeModel.from_document(doc) for doc in state["stumps"]]
        labels = [np.asarray(doc["leaf_label"], dtype=np.int64) for doc in state["stumps"]]
        return cls(stumps, labels, np.asarray(state["alphas"]), n_classes, state.get("note"))


class GradientBoostingClassifier:
    """Stagewise additive model on the multinomial log-loss."""

    HYPERPARAMETERS = {"n_stages": 100, "learning_rate": 0.1, "max_depth": 3}
    ACCEPTS_SINGLE_CLASS = False

    def __init__(
        self,
        init_scores: np.ndarray,
        trees: list[list[TreeModel]],
        leaf_values: list[list[np.ndarray]],
        learning_rate: float,
        loss_trace: list[float] | None = None,
    ):
        self.init_scores = np.asarray(init_scores, dtype=np.float64)
        self.trees = trees
        self.leaf_values = leaf_values
        self.learning_rate = learning_rate
        self.loss_trace = list(loss_trace or [])

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        codes: np.ndarray,
        n_classes: int,
        seed: int,
        *,
        n_stages: int = 100,
        learning_rate: float = 0.1,
        max_depth: int = 3,
    ) -> "GradientBoostingClassifier":
        n = X.shape[0]
        K = n_classes
        onehot = np.zeros((n, K))
        onehot[np.arange(n), codes] = 1.0

        priors = onehot.mean(axis=0)
        init_scores = np.log(priors)
        scores = np.tile(init_scores, (n, 1))

        trees: list[list[TreeModel]] = []
        leaf_values: list[list[np.ndarray]] = []
        trace: list[float] = []
        newton_scale = (K - 1.0) / K

        for _ in range(n_stages):
            P = scores - scores.max(axis=1, keepdims=True)
            np.exp(P, out=P)
            P /= P.sum(axis=1, keepdims=True)
            residual = onehot - P

            stage_trees: list[TreeModel] = []
            stage_values: list[np.ndarray] = []
            for k in range(K):
                r = residual[:, k]
                feature, threshold, left, right, _, train_leaf = kernels.grow_tree_regression(
                    X, r, max_depth=max_depth, min_samples_split=2
                )
                n_nodes = feature.shape[0]
                numerator = np.bincount(train_leaf, weights=r, minlength=n_nodes)
                curvature = np.abs(r) * (1.0 - np.abs(r))
                denominator = np.bincount(train_leaf, weights=curvature, minlength=n_nodes)
                safe = np.where(denominator < _NEWTON_EPS, 1.0, denominator)
                gamma = np.where(
                    denominator < _NEWTON_EPS, 0.0, newton_scale * numerator / safe
                )
                scores[:, k] += learning_rate * gamma[train_leaf]
                stage_trees.append(TreeModel(feature, threshold, left, right))
                stage_values.append(gamma)
            trees.append(stage_trees)
            leaf_values.append(stage_values)

            zmax = scores.max(axis=1, keepdims=True)
            lse = zmax[:, 0] + np.log(np.exp(scores - zmax).sum(axis=1))
            trace.append(float(np.mean(lse - scores[np.arange(n), codes])))

        return cls(init_scores, trees, leaf_values, learning_rate, trace)

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        scores = np.tile(self.init_scores, (X.shape[0], 1))
        for stage_trees, stage_values in zip(self.trees, self.leaf_values):
            for k, (tree, gamma) in enumerate(zip(stage_trees, stage_values)):
                scores[:, k] += self.learning_rate * gamma[tree.apply(X)]
        return scores

    def predict_codes(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.decision_scores(X), axis=1).astype(np.int64)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        Z = self.decision_scores(X)
        Z -= Z.max(axis=1, keepdims=True)
        np.exp(Z, out=Z)
        return Z / Z.sum(axis=1, keepdims=True)

    def to_state(self) -> dict[str, Any]:
        return {
            "init_scores": self.init_scores.tolist(),
            "learning_rate": self.learning_rate,
            "stages": [
                [
                    {**tree.to_document(), "leaf_value": gamma.tolist()}
                    for tree, gamma in zip(stage_trees, stage_values)
                ]
                for stage_trees, stage_values in zip(self.trees, self.leaf_values)
            ],
        }

    @classmethod
    def from_state(cls, state: dict[str, Any], n_classes: int) -> "GradientBoostingClassifier":
        trees = [
            [TreeModel.from_document(doc) for doc in stage] for stage in state["stages"]
        ]
        values = [
            [np.asarray(doc["leaf_value"], dtype=np.float64) for doc in stage]
            for stage in state["stages"]
        ]
        return cls(np.asarray(state["init_scores"]), trees, values, float(state["learning_rate"]))
