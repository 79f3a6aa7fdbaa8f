"""Classifier scoring: confusion counts, precision/recall/F1, ROC, AUC.

Hard predictions threshold the margin at zero with class 1 (truthful) as the
positive class. The ROC curve adds one point per distinct margin value, so
tied margins form a single diagonal segment and the trapezoidal AUC equals
the pairwise comparison statistic (ties counted half).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .gbm import TreeEnsemble


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    per_class: dict  # class label -> ClassMetrics
    weighted: ClassMetrics
    macro: ClassMetrics
    tp: int
    fp: int
    tn: int
    fn: int
    roc_points: tuple  # (fpr, tpr, threshold), thresholds descending
    auc: float


def _f1(p: float, r: float) -> float:
    return 2.0 * p * r / (p + r) if p + r > 0 else 0.0


def _safe_div(a: float, b: float) -> float:
    return a / b if b else 0.0


def roc_curve(margins: np.ndarray, y: np.ndarray):
    """ROC points from margins, one per distinct margin value.

    Returns a list of (fpr, tpr, threshold) starting at (0, 0, inf); each
    threshold t classifies margin >= t as positive.
    """
    n_pos = int((y == 1).sum())
    n_neg = int((y == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise DataError("ROC needs both classes in the test labels")
    order = np.argsort(-margins, kind="stable")
    sorted_margins = margins[order]
    sorted_y = y[order]

    points = [(0.0, 0.0, float("inf"))]
    tp = fp = 0
    i = 0
    n = len(sorted_y)
    while i < n:
        j = i
        while j < n and sorted_margins[j] == sorted_margins[i]:
            j += 1
        tp += int((sorted_y[i:j] == 1).sum())
        fp += int((sorted_y[i:j] == 0).sum())
        points.append((fp / n_neg, tp / n_pos, float(sorted_margins[i])))
        i = j
    return points


def evaluate_margins(margins: np.ndarray, y: np.ndarray) -> MetricsReport:
    """Score hard predictions (margin >= 0 is class 1) and the ROC/AUC."""
    margins = np.asarray(margins, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if margins.ndim != 1 or margins.shape[0] == 0:
        raise DataError("test set is empty")
    if margins.shape[0] != y.shape[0]:
        raise DataError("margins and labels differ in length")
    if not np.isin(y, (0, 1)).all():
        raise DataError("labels must be 0 or 1")

    pred = (margins >= 0.0).astype(np.int64)
    tp = int(((pred == 1) & (y == 1)).sum())
    fp = int(((pred == 1) & (y == 0)).sum())
    tn = int(((pred == 0) & (y == 0)).sum())
    fn = int(((pred == 0) & (y == 1)).sum())

    n1 = tp + fn
    n0 = tn + fp
    pos = ClassMetrics(
        precision=_safe_div(tp, tp + fp),
        recall=_safe_div(tp, n1),
        f1=_f1(_safe_div(tp, tp + fp), _safe_div(tp, n1)),
        support=n1,
    )
    neg = ClassMetrics(
        precision=_safe_div(tn, tn + fn),
        recall=_safe_div(tn, n0),
        f1=_f1(_safe_div(tn, tn + fn), _safe_div(tn, n0)),
        support=n0,
    )
    total = n0 + n1
    weighted = ClassMetrics(
        precision=(pos.precision * n1 + neg.precision * n0) / total,
        recall=(pos.recall * n1 + neg.recall * n0) / total,
        f1=(pos.f1 * n1 + neg.f1 * n0) / total,
        support=total,
    )
    macro = ClassMetrics(
        precision=(pos.precision + neg.precision) / 2.0,
        recall=(pos.recall + neg.recall) / 2.0,
        f1=(pos.f1 + neg.f1) / 2.0,
        support=total,
    )

    points = roc_curve(margins, y)
    fprs = np.array([p[0] for p in points])
    tprs = np.array([p[1] for p in points])
    auc = float(np.sum(np.diff(fprs) * (tprs[1:] + tprs[:-1]) / 2.0))

    return MetricsReport(
        accuracy=(tp + tn) / total,
        per_class={1: pos, 0: neg},
        weighted=weighted,
        macro=macro,
        tp=tp,
        fp=fp,
        tn=tn,
        fn=fn,
        roc_points=tuple(points),
        auc=auc,
    )


def evaluate(model: TreeEnsemble, X_test: np.ndarray, y_test: np.ndarray) -> MetricsReport:
    X_test = np.asarray(X_test, dtype=np.float64)
    if X_test.ndim != 2 or X_test.shape[0] == 0:
        raise DataError("test set is empty")
    return evaluate_margins(model.predict_margin_batch(X_test), y_test)


def report_table(named_reports) -> str:
    """Text table of Model / Accuracy / Precision / Recall / F1 rows.

    Accuracy renders as a whole percentage, the weighted precision, recall
    and F1 to two decimals.
    """
    named_reports = list(named_reports)
    if not named_reports:
        raise DataError("report_table needs at least one report")
    width = max(len("Model"), max(len(name) for name, _ in named_reports))
    lines = [f"{'Model':<{width}}  Accuracy  Precision  Recall  F1"]
    for name, report in named_reports:
        acc = f"{report.accuracy * 100:.0f}%"
        lines.append(
            f"{name:<{width}}  {acc:<8}  "
            f"{report.weighted.precision:<9.2f}  "
            f"{report.weighted.recall:<6.2f}  "
            f"{report.weighted.f1:.2f}"
        )
    return "\n".join(lines) + "\n"


def report_to_json(report: MetricsReport) -> str:
    def class_dict(m: ClassMetrics):
        return {
            "precision": m.precision,
            "recall": m.recall,
            "f1": m.f1,
            "support": m.support,
        }

    payload = {
        "accuracy": report.accuracy,
        "confusion": {"tp": report.tp, "fp": report.fp, "tn": report.tn, "fn": report.fn},
        "class_1": class_dict(report.per_class[1]),
        "class_0": class_dict(report.per_class[0]),
        "weighted": class_dict(report.weighted),
        "macro": class_dict(report.macro),
        "auc": report.auc,
        "roc_points": [
            {"fpr": fpr, "tpr": tpr, "threshold": thr if thr != float("inf") else "inf"}
            for fpr, tpr, thr in report.roc_points
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def roc_to_csv(report: MetricsReport) -> str:
    lines = ["fpr,tpr,threshold"]
    for fpr, tpr, thr in report.roc_points:
        thr_txt = "inf" if thr == float("inf") else repr(thr)
        lines.append(f"{fpr!r},{tpr!r},{thr_txt}")
    return "\n".join(lines) + "\n"
