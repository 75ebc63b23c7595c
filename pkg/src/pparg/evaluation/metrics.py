"""Classification and regression metrics plus score-distribution statistics."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

FISHER_CLAMP = 1.0 - 1e-7


class DegenerateInputError(ValueError):
    """Metric undefined on this input (constant sequence, empty list, ...)."""


@dataclass(frozen=True)
class ClassificationReport:
    accuracy: float
    f1: float
    confusion: np.ndarray  # c x c counts, rows = gold, cols = predicted
    n: int
    classes: tuple

    def __post_init__(self) -> None:
        if int(self.confusion.sum()) != self.n:
            raise ValueError("confusion counts do not sum to n")
        trace_acc = float(np.trace(self.confusion)) / self.n
        if abs(trace_acc - self.accuracy) > 1e-12:
            raise ValueError("accuracy does not match the confusion diagonal")

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "f1": self.f1,
            "n": self.n,
            "classes": [getattr(c, "value", c) for c in self.classes],
            "confusion": self.confusion.tolist(),
        }


def _class_key(label) -> str:
    return str(getattr(label, "value", label))


def classification_metrics(
    preds: Sequence, golds: Sequence, positive_class=None
) -> ClassificationReport:
    """Accuracy plus F1.

    Two-class input scores positive-class F1 (default positive: ARG when
    present); three or more classes score micro-F1, which for single-label
    predictions equals accuracy.
    """
    if len(preds) != len(golds):
        raise ValueError(f"length mismatch: {len(preds)} preds, {len(golds)} golds")
    n = len(golds)
    if n == 0:
        raise DegenerateInputError("no items to score")
    classes = tuple(sorted(set(golds) | set(preds), key=_class_key))
    index = {c: i for i, c in enumerate(classes)}
    confusion = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for p, g in zip(preds, golds):
        confusion[index[g], index[p]] += 1
    accuracy = float(np.trace(confusion)) / n

    if positive_class is None and len(classes) == 2:
        positive_class = next(
            (c for c in classes if _class_key(c) == "ARG"), None
        )
    if positive_class is not None and len(classes) <= 2:
        if positive_class not in index:
            raise ValueError(f"positive class {positive_class!r} not among labels")
        i = index[positive_class]
        tp = float(confusion[i, i])
        fp = float(confusion[:, i].sum() - tp)
        fn = float(confusion[i, :].sum() - tp)
        f1 = 2 * tp / (2 * tp + fp + fn) if tp > 0 else 0.0
    else:
        f1 = accuracy  # micro-F1 over single-label predictions
    return ClassificationReport(
        accuracy=accuracy, f1=f1, confusion=confusion, n=n, classes=classes
    )


def pearson_r(xs: Sequence[float], ys: Sequence[float]) -> float:
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("xs and ys must be equal-length 1-D sequences")
    if xs.size < 2:
        raise DegenerateInputError("need at least 2 points")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sx = float(dx @ dx)
    sy = float(dy @ dy)
    if sx == 0.0 or sy == 0.0:
        raise DegenerateInputError("constant input has no correlation")
    return float((dx @ dy) / np.sqrt(sx * sy))


def fisher_average(rs: Sequence[float]) -> float:
    """tanh of the mean atanh; values at |r| = 1 are clamped first."""
    if len(rs) == 0:
        raise DegenerateInputError("no fold correlations to average")
    arr = np.asarray(rs, dtype=np.float64)
    if np.any(np.abs(arr) > 1.0):
        raise ValueError("correlations must lie in [-1, 1]")
    if np.any(np.abs(arr) >= FISHER_CLAMP):
        warnings.warn("fold correlation at +/-1 clamped before Fisher transform")
        arr = np.clip(arr, -FISHER_CLAMP, FISHER_CLAMP)
    return float(np.tanh(np.mean(np.arctanh(arr))))


def r2_scores(
    preds: Sequence[float], golds: Sequence[float], p: int
) -> tuple[float, float]:
    """Coefficient of determination and its p-predictor adjustment."""
    preds = np.asarray(preds, dtype=np.float64)
    golds = np.asarray(golds, dtype=np.float64)
    if preds.shape != golds.shape or preds.ndim != 1:
        raise ValueError("preds and golds must be equal-length 1-D sequences")
    n = preds.size
    if n < 2:
        raise DegenerateInputError("need at least 2 points")
    if p < 0:
        raise ValueError("predictor count cannot be negative")
    ss_tot = float(np.sum((golds - golds.mean()) ** 2))
    if ss_tot == 0.0:
        raise DegenerateInputError("constant golds: R^2 undefined")
    ss_res = float(np.sum((golds - preds) ** 2))
    r2 = 1.0 - ss_res / ss_tot
    if n - p - 1 < 1:
        raise DegenerateInputError(f"adjusted R^2 needs n - p - 1 >= 1, got n={n}, p={p}")
    r2_adj = 1.0 - (1.0 - r2) * (n - 1) / (n - p - 1)
    return r2, r2_adj


def score_distribution_stats(scores: Sequence[float]) -> tuple[float, float, float]:
    """Sample mean, sample sd, and a sign-balance z statistic.

    The z value tests the share of positive scores against one half,
    excluding exact zeros: z = (n_pos - m/2) / sqrt(m/4) over the m nonzero
    scores.
    """
    arr = np.asarray(scores, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 2:
        raise ValueError("need a 1-D sequence of at least 2 scores")
    mean = float(arr.mean())
    sd = float(arr.std(ddof=1))
    nonzero = arr[arr != 0.0]
    m = nonzero.size
    if m == 0:
        z = 0.0
    else:
        n_pos = int(np.sum(nonzero > 0))
        z = (n_pos - m / 2.0) / np.sqrt(m / 4.0)
    return mean, sd, float(z)
