"""k-nearest-neighbors classifier (memorizes the training set).

Prediction is a majority vote among the ``k`` Euclidean-nearest training
samples; tied votes are resolved toward the class with the smaller summed
neighbor distance, then toward the lowest label.  Neighbor rank ties at
equal distance are resolved toward the lower training index.
"""

from __future__ import annotations

from typing import Any

import numpy as np

_BLOCK_ROWS = 256  # query rows per distance block, bounds peak memory


class KNeighborsClassifier:
    """Instance-based classifier; ``fit`` only stores the data."""

    HYPERPARAMETERS = {"n_neighbors": 5}
    ACCEPTS_SINGLE_CLASS = True

    def __init__(self, X: np.ndarray, codes: np.ndarray, n_classes: int, n_neighbors: int):
        self.X = np.ascontiguousarray(X, dtype=np.float64)
        self.codes = np.asarray(codes, dtype=np.int64)
        self.n_classes = n_classes
        self.n_neighbors = n_neighbors

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        codes: np.ndarray,
        n_classes: int,
        seed: int,
        *,
        n_neighbors: int = 5,
    ) -> "KNeighborsClassifier":
        if n_neighbors < 1:
            raise ValueError("n_neighbors must be at least 1")
        if n_neighbors > X.shape[0]:
            raise ValueError(
                f"n_neighbors={n_neighbors} exceeds the {X.shape[0]} training samples"
            )
        return cls(X, codes, n_classes, int(n_neighbors))

    def _vote(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Per-query class vote counts and summed neighbor distances."""
        X = np.ascontiguousarray(X, dtype=np.float64)
        k = self.n_neighbors
        train_sq = np.einsum("ij,ij->i", self.X, self.X)
        votes = np.zeros((X.shape[0], self.n_classes))
        dist_sums = np.zeros((X.shape[0], self.n_classes))
        for lo in range(0, X.shape[0], _BLOCK_ROWS):
            q = X[lo:lo + _BLOCK_ROWS]
            d2 = train_sq - 2.0 * (q @ self.X.T)
            d2 += np.einsum("ij,ij->i", q, q)[:, None]
            np.maximum(d2, 0.0, out=d2)
            if k < d2.shape[1]:
                part = np.argpartition(d2, k - 1, axis=1)[:, :k]
            else:
                part = np.broadcast_to(np.arange(d2.shape[1]), d2.shape).copy()
            # order the k candidates by (distance, training index) so that
            # equal-distance neighbors resolve toward the lower index
            rows = np.arange(q.shape[0])[:, None]
            cand_d = d2[rows, part]
            order = np.lexsort((part, cand_d), axis=1)
            neigh = part[rows, order]
            neigh_d = np.sqrt(cand_d[rows, order])
            labels = self.codes[neigh]
            out_rows = np.broadcast_to(np.arange(lo, lo + q.shape[0])[:, None], labels.shape)
            np.add.at(votes, (out_rows, labels), 1.0)
            np.add.at(dist_sums, (out_rows, labels), neigh_d)
        return votes, dist_sums

    def predict_codes(self, X: np.ndarray) -> np.ndarray:
        votes, dist_sums = self._vote(X)
        out = np.empty(X.shape[0], dtype=np.int64)
        for i in range(X.shape[0]):
            best = np.max(votes[i])
            tied = np.nonzero(votes[i] == best)[0]
            if tied.shape[0] == 1:
                out[i] = tied[0]
            else:
                # smaller summed distance wins; argmin takes the first
                # (lowest label) among remaining ties
                out[i] = tied[np.argmin(dist_sums[i, tied])]
        return out

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        votes, _ = self._vote(X)
        return votes / self.n_neighbors

    def to_state(self) -> dict[str, Any]:
        return {
            "n_neighbors": self.n_neighbors,
            "X": self.X.tolist(),
            "codes": self.codes.tolist(),
        }

    @classmethod
    def from_state(cls, state: dict[str, Any], n_classes: int) -> "KNeighborsClassifier":
        return cls(
            np.asarray(state["X"], dtype=np.float64),
            np.asarray(state["codes"], dtype=np.int64),
            n_classes,
            int(state["n_neighbors"]),
        )
