"""Feature standardization, speed-class discretization, and split planning.

Conventions pinned here (and relied on by the rest of the toolkit):

* Standardization uses the population standard deviation (divide by N).
  ``ddof=1`` switches to the sample convention.
* Speed classes are ``min(floor(speed / 10), 14)``: bin width 10 km/h,
  15 classes, anything above 149.99 km/h clips into class 14.
* Split shuffling uses numpy's PCG64 generator seeded with the plan seed,
  so a (N, seed) pair reproduces the identical plan on any platform.
  The test-set size is round-half-up of ``test_fraction * N``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import SchemaError

N_CLASSES = 15
CLASS_WIDTH_KMH = 10.0


@dataclass(frozen=True)
class StandardizationParams:
    mean: np.ndarray  # (F,)
    std_dev: np.ndarray  # (F,), >= 0

    @property
    def n_features(self) -> int:
        return self.mean.shape[0]


def fit_standardizer(features: np.ndarray, ddof: int = 0) -> StandardizationParams:
    """Column means and standard deviations of ``features``.

    ``ddof=0`` (default) is the population convention; ``ddof=1`` the
    sample convention.
    """
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError("features must be a nonempty N x F matrix")
    mean = X.mean(axis=0)
    if ddof >= X.shape[0]:
        # a single row has no spread under the sample convention
        return StandardizationParams(mean=mean, std_dev=np.zeros(X.shape[1]))
    std_dev = X.std(axis=0, ddof=ddof)
    # A constant column must report zero spread even when summation
    # rounding leaves the computed mean a hair off the common value.
    constant = (X == X[:1]).all(axis=0)
    std_dev[constant] = 0.0
    mean[constant] = X[0, constant]
    return StandardizationParams(mean=mean, std_dev=std_dev)


def apply_standardizer(params: StandardizationParams, features: np.ndarray) -> np.ndarray:
    """Standard scores ``(x - mean) / std`` per column; zero-spread columns
    map to all zeros.  (A column whose variance underflows to zero counts
    as zero-spread.)"""
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != params.n_features:
        raise ValueError(
            f"feature count {X.shape[1] if X.ndim == 2 else '?'} does not match "
            f"standardizer ({params.n_features})"
        )
    std = np.where(params.std_dev == 0, 1.0, params.std_dev)
    Z = (X - params.mean) / std
    Z[:, params.std_dev == 0] = 0.0
    return Z


def discretize_speed(speeds: np.ndarray) -> np.ndarray:
    """Map km/h speeds onto classes 0..14: ``min(floor(v / 10), 14)``.

    Missing entries (NaN) pass through as NaN so callers can drop them
    alongside missing features; negative or infinite speeds are rejected
    as physically invalid.
    """
    v = np.asarray(speeds, dtype=np.float64)
    present = ~np.isnan(v)
    if np.any(v[present] < 0):
        raise ValueError("negative speed in recording; cannot discretize")
    if np.any(np.isinf(v)):
        raise ValueError("non-finite speed in recording; cannot discretize")
    labels = np.minimum(np.floor(v / CLASS_WIDTH_KMH), N_CLASSES - 1)
    if present.all():
        return labels.astype(np.int64)
    return labels  # float vector, NaN marks missing


@dataclass(frozen=True)
class SplitPlan:
    """A reproducible 90/10 + k-fold partition of ``n_samples`` indices."""

    seed: int
    n_samples: int
    train_indices: np.ndarray  # shuffled order
    test_indices: np.ndarray
    folds: tuple[np.ndarray, ...]  # disjoint, cover train_indices

    def to_document(self) -> str:
        doc = {
            "version": 1,
            "seed": self.seed,
            "n_samples": self.n_samples,
            "train_indices": self.train_indices.tolist(),
            "test_indices": self.test_indices.tolist(),
            "folds": [f.tolist() for f in self.folds],
        }
        return json.dumps(doc, indent=2)

    @staticmethod
    def from_document(text: str) -> "SplitPlan":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError(
                f"malformed split plan: {e.msg} (line {e.lineno}, column {e.colno})"
            ) from e
        for key in ("seed", "n_samples", "train_indices", "test_indices", "folds"):
            if key not in doc:
                raise SchemaError(f"split plan: {key} required")
        return SplitPlan(
            seed=int(doc["seed"]),
            n_samples=int(doc["n_samples"]),
            train_indices=np.asarray(doc["train_indices"], dtype=np.int64),
            test_indices=np.asarray(doc["test_indices"], dtype=np.int64),
            folds=tuple(np.asarray(f, dtype=np.int64) for f in doc["folds"]),
        )


def make_split(
    n_samples: int,
    test_fraction: float = 0.10,
    seed: int = 0,
    n_folds: int = 5,
) -> SplitPlan:
    """Shuffle ``0..n_samples-1`` (PCG64 seeded by ``seed``), reserve the
    last round-half-up ``test_fraction * n`` indices for testing, and cut
    the remaining train sequence into ``n_folds`` contiguous blocks whose
    sizes differ by at most one."""
    if n_samples < 10:
        raise ValueError(f"need at least 10 samples to split, got {n_samples}")
    if not 0 < test_fraction < 1:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")

    rng = np.random.default_rng(seed)
    order = rng.permutation(n_samples).astype(np.int64)

    n_test = int(n_samples * test_fraction + 0.5)  # round half up
    n_test = min(max(n_test, 1), n_samples - n_folds)  # keep folds nonempty
    train = order[: n_samples - n_test]
    test = order[n_samples - n_test :]

    n_train = train.shape[0]
    base, extra = divmod(n_train, n_folds)
    folds = []
    start = 0
    for i in range(n_folds):
        size = base + (1 if i < extra else 0)
        folds.append(train[start : start + size])
        start += size

    return SplitPlan(
        seed=seed,
        n_samples=n_samples,
        train_indices=train,
        test_indices=test,
        folds=tuple(folds),
    )
