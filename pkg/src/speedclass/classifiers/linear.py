"""Linear classifiers: multinomial logistic regression and a linear SVM.

Logistic regression minimizes the L2-regularized mean cross-entropy by
full-batch gradient descent with a fixed step size, stopping when the
loss improvement falls below a tolerance.  The linear SVM trains one
hinge-loss binary separator per class (one-vs-rest) by subgradient
descent with step ``1/(l2 * t)``; because raw subgradient iterates are
not monotone, each separator keeps the best iterate seen and the recorded
objective trace is the running best (non-increasing by construction).
"""

from __future__ import annotations

from typing import Any

import numpy as np

from ..errors import CapabilityError


def _softmax_rows(Z: np.ndarray) -> np.ndarray:
    Z = Z - Z.max(axis=1, keepdims=True)
    np.exp(Z, out=Z)
    Z /= Z.sum(axis=1, keepdims=True)
    return Z


def loss_and_gradient(
    W: np.ndarray,
    b: np.ndarray,
    X: np.ndarray,
    codes: np.ndarray,
    l2: float,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Regularized mean cross-entropy and its analytic gradient.

    Loss is ``mean(-log p[y]) + l2/(2n) * ||W||^2`` with an unregularized
    intercept.  Returns ``(loss, dW, db)``.
    """
    n = X.shape[0]
    Z = X @ W + b
    zmax = Z.max(axis=1, keepdims=True)
    lse = zmax[:, 0] + np.log(np.exp(Z - zmax).sum(axis=1))
    ce = float(np.mean(lse - Z[np.arange(n), codes]))
    loss = ce + 0.5 * l2 / n * float(np.sum(W * W))

    P = np.exp(Z - lse[:, None])
    P[np.arange(n), codes] -= 1.0
    dW = X.T @ P / n + (l2 / n) * W
    db = P.mean(axis=0)
    return loss, dW, db


class LogisticRegressionClassifier:
    """Multinomial softmax regression trained by full-batch descent."""

    HYPERPARAMETERS = {
        "l2": 1.0,
        "learning_rate": 0.1,
        "max_epochs": 1000,
        "tol": 1e-6,
    }
    ACCEPTS_SINGLE_CLASS = False

    def __init__(self, W: np.ndarray, b: np.ndarray, loss_trace: list[float] | None = None):
        self.W = np.asarray(W, dtype=np.float64)
        self.b = np.asarray(b, dtype=np.float64)
        self.loss_trace = list(loss_trace or [])

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        codes: np.ndarray,
        n_classes: int,
        seed: int,
        *,
        l2: float = 1.0,
        learning_rate: float = 0.1,
        max_epochs: int = 1000,
        tol: float = 1e-6,
    ) -> "LogisticRegressionClassifier":
        W = np.zeros((X.shape[1], n_classes))
        b = np.zeros(n_classes)
        trace: list[float] = []
        previous = np.inf
        for _ in range(max_epochs):
            loss, dW, db = loss_and_gradient(W, b, X, codes, l2)
            trace.append(loss)
            if abs(previous - loss) < tol:
                break
            previous = loss
            W -= learning_rate * dW
            b -= learning_rate * db
        return cls(W, b, trace)

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        return X @ self.W + self.b

    def predict_codes(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.decision_scores(X), axis=1).astype(np.int64)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return _softmax_rows(self.decision_scores(X))

    def to_state(self) -> dict[str, Any]:
        return {"W": self.W.tolist(), "b": self.b.tolist()}

    @classmethod
    def from_state(cls, state: dict[str, Any], n_classes: int) -> "LogisticRegressionClassifier":
        return cls(np.asarray(state["W"]), np.asarray(state["b"]))


class LinearSVMClassifier:
    """One-vs-rest hinge-loss separators trained by subgradient descent."""

    HYPERPARAMETERS = {"l2": 1.0, "epochs": 1000}
    ACCEPTS_SINGLE_CLASS = False

    def __init__(self, W: np.ndarray, b: np.ndarray, loss_trace: list[float] | None = None):
        self.W = np.asarray(W, dtype=np.float64)
        self.b = np.asarray(b, dtype=np.float64)
        self.loss_trace = list(loss_trace or [])

    @staticmethod
    def _objective(w: np.ndarray, b: float, X: np.ndarray, sign: np.ndarray, l2: float) -> float:
        margins = 1.0 - sign * (X @ w + b)
        hinge = float(np.mean(np.maximum(margins, 0.0)))
        return 0.5 * l2 * float(w @ w) + hinge

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        codes: np.ndarray,
        n_classes: int,
        seed: int,
        *,
        l2: float = 1.0,
        epochs: int = 1000,
    ) -> "LinearSVMClassifier":
        n, n_feat = X.shape
        W = np.empty((n_feat, n_classes))
        b = np.empty(n_classes)
        best_per_class = np.empty((epochs, n_classes))
        for k in range(n_classes):
            sign = np.where(codes == k, 1.0, -1.0)
            w = np.zeros(n_feat)
            intercept = 0.0
            best = cls._objective(w, intercept, X, sign, l2)
            best_w, best_b = w.copy(), intercept
            for t in range(1, epochs + 1):
                margins = 1.0 - sign * (X @ w + intercept)
                violating = margins > 0.0
                dw = l2 * w - X[violating].T @ sign[violating] / n
                dbias = -float(sign[violating].sum()) / n
                step = 1.0 / (l2 * t)
                w = w - step * dw
                intercept -= step * dbias
                objective = cls._objective(w, intercept, X, sign, l2)
                if objective < best:
                    best = objective
                    best_w, best_b = w.copy(), intercept
                best_per_class[t - 1, k] = best
            W[:, k] = best_w
            b[k] = best_b
        trace = best_per_class.sum(axis=1)
        return cls(W, b, trace.tolist())

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        return X @ self.W + self.b

    def predict_codes(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.decision_scores(X), axis=1).astype(np.int64)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        raise CapabilityError(
            "LinearSVM produces margin scores, not calibrated class probabilities"
        )

    def to_state(self) -> dict[str, Any]:
        return {"W": self.W.tolist(), "b": self.b.tolist()}

    @classmethod
    def from_state(cls, state: dict[str, Any], n_classes: int) -> "LinearSVMClassifier":
        return cls(np.asarray(state["W"]), np.asarray(state["b"]))
