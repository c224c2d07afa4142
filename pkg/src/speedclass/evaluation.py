"""Confusion matrices, per-class metrics, cross-validation, and reports.

Metric conventions:

* The label vocabulary of a confusion matrix is the sorted union of true
  and predicted labels, so a prediction outside the true label set still
  lands in a (zero-support) row.
* Any zero-denominator metric (precision with no predictions for a class,
  recall with no support, F1 when both are zero) evaluates to 0.0 and
  increments the report's ``zero_division_events`` counter.
* Weighted averages are support-weighted; accuracy is the trace ratio,
  which for single-label classification always equals support-weighted
  recall.
* Cross-validation spreads report the population standard deviation
  across folds (divide by the fold count, not ``n - 1``).

Rendering rounds at the last moment: report objects carry full-precision
floats, and only the text tables format them to two decimals.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .classifiers import TrainedClassifier, TrainingConfig, fit
from .errors import DegenerateDataError
from .ingestion import LabeledDataset
from .preprocess import SplitPlan, apply_standardizer, fit_standardizer

logger = logging.getLogger(__name__)

METRIC_NAMES = ("weighted_precision", "weighted_recall", "weighted_f1", "accuracy")


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts of (true, predicted) label pairs.

    ``counts[i, j]`` is the number of samples whose true label is
    ``class_list[i]`` and predicted label ``class_list[j]``.
    """

    counts: np.ndarray
    class_list: np.ndarray

    @classmethod
    def from_predictions(cls, y_true: Sequence[int], y_pred: Sequence[int]) -> "ConfusionMatrix":
        y_true = np.asarray(y_true, dtype=np.int64)
        y_pred = np.asarray(y_pred, dtype=np.int64)
        if y_true.shape != y_pred.shape or y_true.ndim != 1:
            raise ValueError("y_true and y_pred must be 1-D arrays of equal length")
        if y_true.shape[0] == 0:
            raise ValueError("cannot build a confusion matrix from zero samples")
        class_list = np.unique(np.concatenate([y_true, y_pred]))
        t = np.searchsorted(class_list, y_true)
        p = np.searchsorted(class_list, y_pred)
        k = class_list.shape[0]
        counts = np.zeros((k, k), dtype=np.int64)
        np.add.at(counts, (t, p), 1)
        return cls(counts=counts, class_list=class_list)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class ClassMetrics:
    """Per-class precision/recall/F1 with supports and a zero-division tally."""

    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    support: np.ndarray
    zero_division_events: int


def class_metrics(matrix: ConfusionMatrix) -> ClassMetrics:
    """Per-class metrics under the zero-denominator-is-zero convention."""
    counts = matrix.counts.astype(np.float64)
    tp = np.diag(counts)
    predicted = counts.sum(axis=0)
    support = counts.sum(axis=1)

    zero_events = 0
    k = counts.shape[0]
    precision = np.zeros(k)
    recall = np.zeros(k)
    f1 = np.zeros(k)
    for i in range(k):
        if predicted[i] > 0:
            precision[i] = tp[i] / predicted[i]
        else:
            zero_events += 1
        if support[i] > 0:
            recall[i] = tp[i] / support[i]
        else:
            zero_events += 1
        if precision[i] + recall[i] > 0:
            f1[i] = 2.0 * precision[i] * recall[i] / (precision[i] + recall[i])
        else:
            zero_events += 1
    return ClassMetrics(
        precision=precision,
        recall=recall,
        f1=f1,
        support=matrix.counts.sum(axis=1),
        zero_division_events=zero_events,
    )


def accuracy(matrix: ConfusionMatrix) -> float:
    """Fraction of samples on the confusion matrix diagonal."""
    return float(np.trace(matrix.counts) / matrix.total)


def weighted_average(values: np.ndarray, support: np.ndarray) -> float:
    """Support-weighted mean of per-class metric values.

    Raises:
        ValueError: If the total support is zero.
    """
    values = np.asarray(values, dtype=np.float64)
    support = np.asarray(support, dtype=np.float64)
    total = support.sum()
    if total <= 0:
        raise ValueError("weighted average needs a positive total support")
    return float((values * support).sum() / total)


@dataclass(frozen=True)
class EvaluationReport:
    """Everything a per-class metrics table needs, at full precision."""

    class_list: np.ndarray
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    support: np.ndarray
    accuracy: float
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    total_support: int
    zero_division_events: int

    @classmethod
    def from_predictions(cls, y_true, y_pred) -> "EvaluationReport":
        matrix = ConfusionMatrix.from_predictions(y_true, y_pred)
        per_class = class_metrics(matrix)
        return cls(
            class_list=matrix.class_list,
            precision=per_class.precision,
            recall=per_class.recall,
            f1=per_class.f1,
            support=per_class.support,
            accuracy=accuracy(matrix),
            weighted_precision=weighted_average(per_class.precision, per_class.support),
            weighted_recall=weighted_average(per_class.recall, per_class.support),
            weighted_f1=weighted_average(per_class.f1, per_class.support),
            total_support=matrix.total,
            zero_division_events=per_class.zero_division_events,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "class_list": self.class_list.tolist(),
            "precision": self.precision.tolist(),
            "recall": self.recall.tolist(),
            "f1": self.f1.tolist(),
            "support": self.support.tolist(),
            "accuracy": self.accuracy,
            "weighted_precision": self.weighted_precision,
            "weighted_recall": self.weighted_recall,
            "weighted_f1": self.weighted_f1,
            "total_support": self.total_support,
            "zero_division_events": self.zero_division_events,
        }


@dataclass(frozen=True)
class FoldResult:
    """Outcome of one cross-validation fold."""

    fold_index: int
    report: EvaluationReport


@dataclass(frozen=True)
class CrossValidationReport:
    """Mean and population spread of the weighted metrics across folds."""

    algorithm: str
    metric_means: dict[str, float]
    metric_stds: dict[str, float]
    folds: tuple[FoldResult, ...]
    failures: tuple[tuple[int, str], ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "algorithm": self.algorithm,
            "metric_means": dict(self.metric_means),
            "metric_stds": dict(self.metric_stds),
            "folds": [
                {"fold_index": f.fold_index, **f.report.to_dict()} for f in self.folds
            ],
            "failures": [
                {"fold_index": i, "message": msg} for i, msg in self.failures
            ],
        }


def _metric_vector(report: EvaluationReport) -> dict[str, float]:
    return {
        "weighted_precision": report.weighted_precision,
        "weighted_recall": report.weighted_recall,
        "weighted_f1": report.weighted_f1,
        "accuracy": report.accuracy,
    }


def cross_validate(
    config: TrainingConfig,
    dataset: LabeledDataset,
    plan: SplitPlan,
    *,
    standardize: bool = True,
) -> CrossValidationReport:
    """K-fold cross-validation on the plan's training portion.

    Each fold validates on one block and trains on the concatenation of
    the others; standardization parameters are fitted on each fold's
    training part only.  A fold whose training fails (for example a
    single-class fold for a discriminative family) is excluded from the
    spreads and recorded under ``failures``.
    """
    features = np.asarray(dataset.features, dtype=np.float64)
    labels = np.asarray(dataset.labels, dtype=np.int64)

    folds: list[FoldResult] = []
    failures: list[tuple[int, str]] = []
    for i in range(len(plan.folds)):
        val_idx = plan.folds[i]
        train_idx = np.concatenate(
            [plan.folds[j] for j in range(len(plan.folds)) if j != i]
        )
        X_train, y_train = features[train_idx], labels[train_idx]
        X_val, y_val = features[val_idx], labels[val_idx]
        if standardize:
            params = fit_standardizer(X_train)
            X_train = apply_standardizer(params, X_train)
            X_val = apply_standardizer(params, X_val)
        try:
            model = fit(
                config,
                LabeledDataset(
                    features=X_train, labels=y_train, feature_names=dataset.feature_names
                ),
            )
        except DegenerateDataError as exc:
            logger.warning("fold %d failed for %s: %s", i, config.algorithm.value, exc)
            failures.append((i, str(exc)))
            continue
        folds.append(
            FoldResult(
                fold_index=i,
                report=EvaluationReport.from_predictions(y_val, model.predict(X_val)),
            )
        )

    if not folds:
        raise DegenerateDataError(
            f"every cross-validation fold failed for {config.algorithm.value}: "
            + "; ".join(msg for _, msg in failures)
        )

    means: dict[str, float] = {}
    stds: dict[str, float] = {}
    for name in METRIC_NAMES:
        values = np.asarray([_metric_vector(f.report)[name] for f in folds])
        means[name] = float(values.mean())
        stds[name] = float(values.std())  # population spread over folds
    return CrossValidationReport(
        algorithm=config.algorithm.value,
        metric_means=means,
        metric_stds=stds,
        folds=tuple(folds),
        failures=tuple(failures),
    )


def evaluate_model(model: TrainedClassifier, features, labels) -> EvaluationReport:
    """Holdout evaluation of a trained model on (already standardized)
    features."""
    return EvaluationReport.from_predictions(
        np.asarray(labels, dtype=np.int64), model.predict(features)
    )


# ---------------------------------------------------------------------------
# text rendering


def _format_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(header[c]), *(len(r[c]) for r in rows)) for c in range(len(header))]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def render_class_table(report: EvaluationReport, title: str = "") -> str:
    """Per-class metrics table with a weighted-average row."""
    rows = [
        [
            str(int(c)),
            f"{report.precision[i]:.2f}",
            f"{report.recall[i]:.2f}",
            f"{report.f1[i]:.2f}",
            str(int(report.support[i])),
        ]
        for i, c in enumerate(report.class_list)
    ]
    rows.append(
        [
            "Weighted AVG",
            f"{report.weighted_precision:.2f}",
            f"{report.weighted_recall:.2f}",
            f"{report.weighted_f1:.2f}",
            str(report.total_support),
        ]
    )
    table = _format_table(["Class", "Precision", "Recall", "F1-Score", "Support"], rows)
    parts = []
    if title:
        parts.append(title + "\n")
    parts.append(table)
    parts.append(f"Accuracy: {report.accuracy:.2f}\n")
    if report.zero_division_events:
        parts.append(
            f"Note: {report.zero_division_events} metric value(s) had a zero "
            "denominator and were reported as 0.\n"
        )
    return "".join(parts)


def render_cv_table(reports: Mapping[str, CrossValidationReport]) -> str:
    """Cross-validation summary: one AVG/STD column pair per algorithm."""
    metric_labels = {
        "weighted_precision": "Weighted Precision",
        "weighted_recall": "Weighted Recall",
        "weighted_f1": "Weighted F1-Score",
        "accuracy": "Accuracy",
    }
    header = ["Metric"]
    for name in reports:
        header += [f"{name} AVG", f"{name} STD"]
    rows = []
    for metric, label in metric_labels.items():
        row = [label]
        for report in reports.values():
            row.append(f"{report.metric_means[metric]:.2f}")
            row.append(f"{report.metric_stds[metric]:.2f}")
        rows.append(row)
    table = _format_table(header, rows)
    notes = []
    for name, report in reports.items():
        for fold_index, message in report.failures:
            notes.append(f"Note: {name} fold {fold_index} excluded: {message}\n")
    return table + "".join(notes)


def render_comparison_table(reports: Mapping[str, EvaluationReport]) -> str:
    """Holdout comparison: one column per algorithm, weighted metrics rows."""
    header = ["Metric"] + list(reports)
    metric_rows = [
        ("Weighted AVG Precision", "weighted_precision"),
        ("Weighted AVG Recall", "weighted_recall"),
        ("Weighted AVG F1-Score", "weighted_f1"),
        ("Accuracy", "accuracy"),
    ]
    rows = []
    for label, attr in metric_rows:
        rows.append([label] + [f"{getattr(r, attr):.2f}" for r in reports.values()])
    return _format_table(header, rows)
