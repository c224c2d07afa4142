"""Eight classifier families behind one train/predict/serialize surface.

Every family is implemented from first principles on numpy (the
tree-based families share the compiled split-search kernels).  A
:class:`TrainingConfig` names the family, overrides hyperparameters, and
carries the mandatory seed; :func:`fit` returns a
:class:`TrainedClassifier` that predicts original label values, exposes
class probabilities where the family supports them, and round-trips
through a versioned JSON document without changing a single prediction.

Determinism: with equal config and data, repeated fits produce identical
models and predictions; all randomness flows from the config seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from ..domain import Algorithm
from ..errors import ConfigError, DegenerateDataError, SchemaError
from ..ingestion import LabeledDataset
from .boosting import AdaBoostClassifier, GradientBoostingClassifier
from .forest import RandomForestClassifier, bootstrap_sample
from .linear import LinearSVMClassifier, LogisticRegressionClassifier, loss_and_gradient
from .naive_bayes import GaussianNBClassifier
from .neighbors import KNeighborsClassifier
from .tree import DecisionTreeClassifier, find_best_split, gini_impurity

MODEL_FORMAT = "speedclass-model"
MODEL_VERSION = 1

_FAMILIES: dict[Algorithm, type] = {
    Algorithm.GRADIENT_BOOSTING: GradientBoostingClassifier,
    Algorithm.DECISION_TREE: DecisionTreeClassifier,
    Algorithm.RANDOM_FOREST: RandomForestClassifier,
    Algorithm.LOGISTIC_REGRESSION: LogisticRegressionClassifier,
    Algorithm.KNEIGHBORS: KNeighborsClassifier,
    Algorithm.GAUSSIAN_NB: GaussianNBClassifier,
    Algorithm.LINEAR_SVM: LinearSVMClassifier,
    Algorithm.ADABOOST: AdaBoostClassifier,
}


def default_hyperparameters(algorithm: Algorithm) -> dict[str, Any]:
    """The full hyperparameter mapping (name -> default) of a family."""
    return dict(_FAMILIES[algorithm].HYPERPARAMETERS)


def _resolve_algorithm(algorithm: Algorithm | str) -> Algorithm:
    if isinstance(algorithm, Algorithm):
        return algorithm
    try:
        return Algorithm(algorithm)
    except ValueError:
        valid = ", ".join(a.value for a in Algorithm)
        raise ConfigError(f"unknown algorithm {algorithm!r}; valid: {valid}") from None


@dataclass(frozen=True)
class TrainingConfig:
    """Names a classifier family, its hyperparameters, and the seed.

    ``hyperparameters`` holds only the overrides; unknown names are
    rejected so typos cannot silently fall back to defaults.  The seed is
    mandatory: every source of randomness in training flows from it.
    """

    algorithm: Algorithm
    seed: int
    hyperparameters: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "algorithm", _resolve_algorithm(self.algorithm))
        if not isinstance(self.seed, (int, np.integer)) or isinstance(self.seed, bool):
            raise ConfigError("seed must be an integer")
        object.__setattr__(self, "seed", int(self.seed))
        known = _FAMILIES[self.algorithm].HYPERPARAMETERS
        unknown = sorted(set(self.hyperparameters) - set(known))
        if unknown:
            raise ConfigError(
                f"unknown hyperparameters for {self.algorithm.value}: "
                f"{', '.join(unknown)}; valid: {', '.join(sorted(known))}"
            )
        object.__setattr__(self, "hyperparameters", dict(self.hyperparameters))

    def resolved_hyperparameters(self) -> dict[str, Any]:
        """Defaults overlaid with this config's overrides."""
        resolved = default_hyperparameters(self.algorithm)
        resolved.update(self.hyperparameters)
        return resolved


class TrainedClassifier:
    """A fitted model bound to its label vocabulary."""

    def __init__(
        self,
        algorithm: Algorithm,
        seed: int,
        hyperparameters: dict[str, Any],
        class_list: np.ndarray,
        n_features: int,
        impl: Any,
    ):
        self.algorithm = algorithm
        self.seed = seed
        self.hyperparameters = hyperparameters
        self.class_list = np.asarray(class_list, dtype=np.int64)
        self.n_features = n_features
        self.impl = impl

    def _check_features(self, features: np.ndarray) -> np.ndarray:
        X = np.asarray(features, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError(f"features must be 2-dimensional, got shape {X.shape}")
        if X.shape[1] != self.n_features:
            raise ValueError(
                f"model was trained on {self.n_features} features, got {X.shape[1]}"
            )
        if X.shape[0] and not np.isfinite(X).all():
            raise ValueError("features must be finite (no NaN or infinity)")
        return np.ascontiguousarray(X)

    def predict(self, features: np.ndarray) -> np.ndarray:
        """Predicted labels, always drawn from the training label set."""
        X = self._check_features(features)
        if X.shape[0] == 0:
            return np.empty(0, dtype=np.int64)
        return self.class_list[self.impl.predict_codes(X)]

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        """Per-class probabilities, columns ordered like ``class_list``.

        Raises:
            CapabilityError: For families without probability semantics
                (LinearSVM).
        """
        X = self._check_features(features)
        if X.shape[0] == 0:
            return np.empty((0, self.class_list.shape[0]))
        return self.impl.predict_proba(X)

    def to_document(self) -> dict[str, Any]:
        """Versioned JSON-serializable snapshot of the fitted model."""
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "algorithm": self.algorithm.value,
            "seed": self.seed,
            "hyperparameters": self.hyperparameters,
            "class_list": self.class_list.tolist(),
            "n_features": self.n_features,
            "state": self.impl.to_state(),
        }


def fit(config: TrainingConfig, dataset: LabeledDataset) -> TrainedClassifier:
    """Train one classifier family on a labeled dataset.

    Raises:
        DegenerateDataError: Empty dataset, or a single label class for
            families that need a decision boundary (LogisticRegression,
            LinearSVM, AdaBoost, GradientBoosting).
        ValueError: Non-finite feature values.
    """
    X = np.ascontiguousarray(dataset.features, dtype=np.float64)
    y = np.asarray(dataset.labels, dtype=np.int64)
    if X.shape[0] == 0:
        raise DegenerateDataError("cannot train on an empty dataset")
    if not np.isfinite(X).all():
        raise ValueError("features must be finite (no NaN or infinity)")

    class_list = np.unique(y)
    family = _FAMILIES[config.algorithm]
    if class_list.shape[0] < 2 and not family.ACCEPTS_SINGLE_CLASS:
        raise DegenerateDataError(
            f"{config.algorithm.value} needs at least two label classes, "
            f"but every sample is labeled {class_list[0]}"
        )
    codes = np.searchsorted(class_list, y)

    impl = family.fit(
        X, codes, int(class_list.shape[0]), config.seed,
        **config.resolved_hyperparameters(),
    )
    return TrainedClassifier(
        config.algorithm, config.seed, config.resolved_hyperparameters(),
        class_list, X.shape[1], impl,
    )


def from_document(document: Mapping[str, Any]) -> TrainedClassifier:
    """Rebuild a trained classifier from its document.

    Raises:
        SchemaError: Wrong format tag, unsupported version, or missing
            fields.
    """
    if not isinstance(document, Mapping):
        raise SchemaError("model document must be a mapping")
    if document.get("format") != MODEL_FORMAT:
        raise SchemaError(
            f"not a model document: format is {document.get('format')!r}, "
            f"expected {MODEL_FORMAT!r}"
        )
    if document.get("version") != MODEL_VERSION:
        raise SchemaError(
            f"unsupported model version {document.get('version')!r}; "
            f"this build reads version {MODEL_VERSION}"
        )
    for key in ("algorithm", "seed", "class_list", "n_features", "state"):
        if key not in document:
            raise SchemaError(f"model document: {key} required")
    algorithm = _resolve_algorithm(document["algorithm"])
    class_list = np.asarray(document["class_list"], dtype=np.int64)
    impl = _FAMILIES[algorithm].from_state(document["state"], int(class_list.shape[0]))
    return TrainedClassifier(
        algorithm,
        int(document["seed"]),
        dict(document.get("hyperparameters", {})),
        class_list,
        int(document["n_features"]),
        impl,
    )


__all__ = [
    "Algorithm",
    "MODEL_FORMAT",
    "MODEL_VERSION",
    "TrainedClassifier",
    "TrainingConfig",
    "bootstrap_sample",
    "default_hyperparameters",
    "find_best_split",
    "fit",
    "from_document",
    "gini_impurity",
    "loss_and_gradient",
]
