"""Gaussian naive Bayes classifier.

Each class models every feature as an independent Gaussian fitted by
per-class mean and population variance.  Variances are smoothed by
``var_smoothing`` times the largest population feature variance of the
whole training set, which keeps log-densities finite for constant
features.  Prediction maximizes the joint log density plus the log class
prior; ties resolve toward the lowest label.
"""

from __future__ import annotations

from typing import Any

import numpy as np


class GaussianNBClassifier:
    """Per-class independent Gaussians with smoothed variances."""

    HYPERPARAMETERS = {"var_smoothing": 1e-9}
    ACCEPTS_SINGLE_CLASS = True

    def __init__(self, theta: np.ndarray, var: np.ndarray, priors: np.ndarray):
        self.theta = np.asarray(theta, dtype=np.float64)
        self.var = np.asarray(var, dtype=np.float64)
        self.priors = np.asarray(priors, dtype=np.float64)

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        codes: np.ndarray,
        n_classes: int,
        seed: int,
        *,
        var_smoothing: float = 1e-9,
    ) -> "GaussianNBClassifier":
        n, n_feat = X.shape
        epsilon = var_smoothing * float(np.var(X, axis=0).max())
        theta = np.empty((n_classes, n_feat))
        var = np.empty((n_classes, n_feat))
        priors = np.empty(n_classes)
        for k in range(n_classes):
            rows = X[codes == k]
            theta[k] = rows.mean(axis=0)
            var[k] = rows.var(axis=0) + epsilon
            priors[k] = rows.shape[0] / n
        return cls(theta, var, priors)

    def _joint_log_likelihood(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        jll = np.empty((X.shape[0], self.theta.shape[0]))
        for k in range(self.theta.shape[0]):
            log_det = np.sum(np.log(2.0 * np.pi * self.var[k]))
            maha = np.sum((X - self.theta[k]) ** 2 / self.var[k], axis=1)
            jll[:, k] = np.log(self.priors[k]) - 0.5 * (log_det + maha)
        return jll

    def predict_codes(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self._joint_log_likelihood(X), axis=1).astype(np.int64)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        jll = self._joint_log_likelihood(X)
        jll -= jll.max(axis=1, keepdims=True)
        p = np.exp(jll)
        return p / p.sum(axis=1, keepdims=True)

    def to_state(self) -> dict[str, Any]:
        return {
            "theta": self.theta.tolist(),
            "var": self.var.tolist(),
            "priors": self.priors.tolist(),
        }

    @classmethod
    def from_state(cls, state: dict[str, Any], n_classes: int) -> "GaussianNBClassifier":
        return cls(
            np.asarray(state["theta"]), np.asarray(state["var"]), np.asarray(state["priors"])
        )
