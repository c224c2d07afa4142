"""Fixture construction: reference-toolkit metrics and predictions.

The heart of the harness is :func:`build_fixtures`, which for every
frozen dataset trains the three most deterministic classifier families
(GaussianNB, k-nearest-neighbors, decision tree) with the reference
toolkit, computes the full metric block for a non-trivial prediction
vector, and writes one self-contained JSON fixture per dataset plus a
manifest holding content hashes and the pinned toolkit version.

Query points whose classification is numerically ambiguous (nearest-
neighbor sets with distance ties, majority votes without a strict
winner, posterior margins below 1e-6) are screened out, because
implementations may legitimately break exact ties differently.  Tree
predictions keep un-screened queries; the consumer tolerates a small
disagreement fraction there instead.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np
import sklearn
from sklearn.metrics import (
    accuracy_score,
    confusion_matrix,
    precision_recall_fscore_support,
)
from sklearn.naive_bayes import GaussianNB
from sklearn.neighbors import KNeighborsClassifier
from sklearn.tree import DecisionTreeClassifier

from .datasets import FrozenDataset, frozen_datasets

FIXTURE_FORMAT = "speedclass-fixture"
FIXTURE_VERSION = 1
MANIFEST_FORMAT = "speedclass-fixture-manifest"
MANIFEST_VERSION = 1

#: The toolkit version every fixture value was produced with.  Fixtures
#: must never be regenerated under any other version.
PINNED_TOOLKIT_VERSION = "1.7.2"

KNN_NEIGHBORS = 5
GNB_VAR_SMOOTHING = 1e-9
POSTERIOR_MARGIN = 1e-6
DISTANCE_MARGIN = 1e-9
MIN_SCREENED_QUERIES = 50
TREE_MIN_AGREEMENT = 0.95


class ToolkitVersionError(RuntimeError):
    """The installed reference toolkit is not the pinned version."""


def check_toolkit_version() -> None:
    installed = sklearn.__version__
    if installed != PINNED_TOOLKIT_VERSION:
        raise ToolkitVersionError(
            f"fixtures are pinned to scikit-learn {PINNED_TOOLKIT_VERSION}, "
            f"but {installed} is installed; refusing to generate"
        )


def _knn_stable_mask(X: np.ndarray, X_query: np.ndarray, k: int) -> np.ndarray:
    """Queries whose k-NN vote is unambiguous.

    A query survives when the k-th and (k+1)-th nearest training points
    are clearly separated (so every implementation agrees on the
    neighbor set) and the neighbor labels have a strict majority winner.
    """
    d2 = ((X_query[:, None, :] - X[None, :, :]) ** 2).sum(axis=2)
    order = np.argsort(d2, axis=1)
    sorted_d2 = np.take_along_axis(d2, order, axis=1)
    kth = sorted_d2[:, k - 1]
    next_ = sorted_d2[:, k]
    scale = np.maximum(next_, 1e-300)
    return (next_ - kth) / scale > DISTANCE_MARGIN


def _strict_majority_mask(labels: np.ndarray, neighbor_labels: np.ndarray) -> np.ndarray:
    """Rows of ``neighbor_labels`` whose label counts have a unique max."""
    out = np.empty(neighbor_labels.shape[0], dtype=bool)
    for i, row in enumerate(neighbor_labels):
        counts = np.bincount(row, minlength=labels.max() + 1)
        top = counts.max()
        out[i] = int((counts == top).sum()) == 1
    return out


def _gnb_margin_mask(model: GaussianNB, X_query: np.ndarray) -> np.ndarray:
    """Queries whose top-2 log-posterior margin clears the threshold."""
    log_proba = model.predict_log_proba(X_query)
    part = np.partition(log_proba, -2, axis=1)
    return part[:, -1] - part[:, -2] > POSTERIOR_MARGIN


def _screen_queries(dataset: FrozenDataset, gnb: GaussianNB, knn: KNeighborsClassifier):
    """Drop queries that any tie-sensitive model could legitimately flip."""
    X, Xq = dataset.X, dataset.X_query
    stable = _knn_stable_mask(X, Xq, KNN_NEIGHBORS)
    _, indices = knn.kneighbors(Xq, n_neighbors=KNN_NEIGHBORS)
    majority = _strict_majority_mask(dataset.y, dataset.y[indices])
    margin = _gnb_margin_mask(gnb, Xq)
    mask = stable & majority & margin
    if int(mask.sum()) < MIN_SCREENED_QUERIES:
        raise RuntimeError(
            f"{dataset.name}: only {int(mask.sum())} of {Xq.shape[0]} query "
            f"points survive tie screening (need {MIN_SCREENED_QUERIES})"
        )
    return Xq[mask], dataset.y_query[mask]


def _metric_block(y_true: np.ndarray, y_pred: np.ndarray) -> dict:
    class_list = np.unique(np.concatenate([y_true, y_pred]))
    precision, recall, f1, support = precision_recall_fscore_support(
        y_true, y_pred, labels=class_list, zero_division=0
    )
    weights = support / support.sum()
    return {
        "y_true": y_true.tolist(),
        "y_pred": y_pred.tolist(),
        "class_list": class_list.tolist(),
        "confusion": confusion_matrix(y_true, y_pred, labels=class_list).tolist(),
        "precision": precision.tolist(),
        "recall": recall.tolist(),
        "f1": f1.tolist(),
        "support": support.tolist(),
        "accuracy": float(accuracy_score(y_true, y_pred)),
        "weighted_precision": float(precision @ weights),
        "weighted_recall": float(recall @ weights),
        "weighted_f1": float(f1 @ weights),
    }


def build_fixture(dataset: FrozenDataset) -> dict:
    """One self-contained fixture document for one frozen dataset."""
    check_toolkit_version()
    X, y = dataset.X, dataset.y

    gnb = GaussianNB(var_smoothing=GNB_VAR_SMOOTHING).fit(X, y)
    knn = KNeighborsClassifier(n_neighbors=KNN_NEIGHBORS).fit(X, y)
    tree = DecisionTreeClassifier(criterion="gini", random_state=0).fit(X, y)

    X_query, y_query = _screen_queries(dataset, gnb, knn)
    tree_predictions = tree.predict(X_query)

    return {
        "format": FIXTURE_FORMAT,
        "version": FIXTURE_VERSION,
        "name": dataset.name,
        "toolkit": {"name": "scikit-learn", "version": PINNED_TOOLKIT_VERSION},
        "data": {
            "X": X.tolist(),
            "y": y.tolist(),
            "X_query": X_query.tolist(),
            "y_query": y_query.tolist(),
            "feature_names": list(dataset.feature_names),
            "n_classes": dataset.n_classes,
        },
        "metrics": _metric_block(y_query, tree_predictions),
        "models": {
            "GaussianNB": {
                "hyperparameters": {"var_smoothing": GNB_VAR_SMOOTHING},
                "predictions": gnb.predict(X_query).tolist(),
            },
            "KNNeighbors": {
                "hyperparameters": {"n_neighbors": KNN_NEIGHBORS},
                "predictions": knn.predict(X_query).tolist(),
            },
            "DecisionTree": {
                "hyperparameters": {"max_depth": None, "min_samples_split": 2},
                "predictions": tree_predictions.tolist(),
                "min_agreement": TREE_MIN_AGREEMENT,
            },
        },
    }


def _dataset_sha256(dataset: FrozenDataset) -> str:
    digest = hashlib.sha256()
    for arr in (dataset.X, dataset.y, dataset.X_query, dataset.y_query):
        digest.update(np.ascontiguousarray(arr).tobytes())
    return digest.hexdigest()


def _dump(document: dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def build_fixtures(out_dir: Path | str) -> list[Path]:
    """Write every fixture plus the manifest; return the written paths."""
    check_toolkit_version()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    written = []
    entries = []
    for dataset in frozen_datasets():
        fixture = build_fixture(dataset)
        text = _dump(fixture)
        path = out_dir / f"{dataset.name}.json"
        path.write_text(text, encoding="utf-8")
        written.append(path)
        entries.append(
            {
                "file": path.name,
                "name": dataset.name,
                "fixture_sha256": hashlib.sha256(text.encode()).hexdigest(),
                "dataset_sha256": _dataset_sha256(dataset),
                "n_rows": int(dataset.X.shape[0]),
                "n_features": int(dataset.X.shape[1]),
                "n_classes": dataset.n_classes,
                "n_query": len(fixture["data"]["y_query"]),
            }
        )

    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(
        _dump(
            {
                "format": MANIFEST_FORMAT,
                "version": MANIFEST_VERSION,
                "toolkit": {"name": "scikit-learn", "version": PINNED_TOOLKIT_VERSION},
                "fixtures": entries,
            }
        ),
        encoding="utf-8",
    )
    written.append(manifest_path)
    return written
