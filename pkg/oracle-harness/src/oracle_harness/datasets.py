"""Frozen datasets for golden fixtures.

Every dataset is generated from a hard-coded seed with numpy's
``default_rng``, so the bytes never change unless this file does.  All
datasets stay within the fixture budget: at most 500 rows, 7 features,
and 15 classes.  Each comes with a held-out query set used for
prediction fixtures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FrozenDataset:
    name: str
    X: np.ndarray  # (n, d) float64 training features
    y: np.ndarray  # (n,) int64 training labels
    X_query: np.ndarray  # (q, d) float64 held-out query points
    y_query: np.ndarray  # (q,) int64 true labels of the query points
    feature_names: tuple[str, ...]

    @property
    def n_classes(self) -> int:
        return int(np.unique(self.y).shape[0])

    def validated(self) -> "FrozenDataset":
        n, d = self.X.shape
        if n > 500:
            raise ValueError(f"{self.name}: {n} rows exceeds the 500-row budget")
        if d > 7:
            raise ValueError(f"{self.name}: {d} features exceeds the 7-feature budget")
        if self.n_classes > 15:
            raise ValueError(f"{self.name}: {self.n_classes} classes exceeds 15")
        if self.X_query.shape[1] != d:
            raise ValueError(f"{self.name}: query width differs from training width")
        return self


def _blobs(rng: np.ndarray, centers: np.ndarray, per_class: int, scale: float):
    k, d = centers.shape
    X = np.vstack(
        [c + rng.normal(scale=scale, size=(per_class, d)) for c in centers]
    )
    y = np.repeat(np.arange(k), per_class)
    order = rng.permutation(X.shape[0])
    return X[order], y[order]


def _overlapping_blobs() -> FrozenDataset:
    """Five moderately overlapping Gaussian blobs in four dimensions."""
    rng = np.random.default_rng(1001)
    centers = rng.uniform(-6.0, 6.0, size=(5, 4))
    X, y = _blobs(rng, centers, per_class=60, scale=1.8)
    Xq, yq = _blobs(rng, centers, per_class=24, scale=1.8)
    return FrozenDataset(
        name="overlapping_blobs_5c",
        X=X, y=y, X_query=Xq, y_query=yq,
        feature_names=("f0", "f1", "f2", "f3"),
    ).validated()


def _rings() -> FrozenDataset:
    """Three concentric rings: nonlinear boundaries in two dimensions."""
    rng = np.random.default_rng(2002)

    def ring(radius: float, n: int):
        angle = rng.uniform(0.0, 2.0 * np.pi, size=n)
        r = radius + rng.normal(scale=0.25, size=n)
        return np.column_stack([r * np.cos(angle), r * np.sin(angle)])

    radii = (1.0, 3.0, 5.0)
    X = np.vstack([ring(r, 80) for r in radii])
    y = np.repeat(np.arange(3), 80)
    order = rng.permutation(X.shape[0])
    Xq = np.vstack([ring(r, 30) for r in radii])
    yq = np.repeat(np.arange(3), 30)
    qorder = rng.permutation(Xq.shape[0])
    return FrozenDataset(
        name="concentric_rings_3c",
        X=X[order], y=y[order], X_query=Xq[qorder], y_query=yq[qorder],
        feature_names=("x", "y"),
    ).validated()


def _ordinal_grid() -> FrozenDataset:
    """Fifteen ordered classes along a drifting direction in seven dims.

    Mirrors the shape of a discretized-speed problem: classes are ordinal,
    neighbors overlap, and all seven feature slots are used.
    """
    rng = np.random.default_rng(3003)
    direction = rng.normal(size=7)
    direction /= np.linalg.norm(direction)
    base = rng.normal(scale=0.8, size=(15, 7))

    def sample(per_class: int):
        X = np.vstack(
            [
                base[c] + 2.2 * c * direction + rng.normal(scale=1.0, size=(per_class, 7))
                for c in range(15)
            ]
        )
        y = np.repeat(np.arange(15), per_class)
        order = rng.permutation(X.shape[0])
        return X[order], y[order]

    X, y = sample(30)
    Xq, yq = sample(8)
    return FrozenDataset(
        name="ordinal_grid_15c",
        X=X, y=y, X_query=Xq, y_query=yq,
        feature_names=tuple(f"f{i}" for i in range(7)),
    ).validated()


def frozen_datasets() -> tuple[FrozenDataset, ...]:
    """All fixture datasets, in manifest order."""
    return (_overlapping_blobs(), _rings(), _ordinal_grid())
