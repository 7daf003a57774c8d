"""Binary classification metrics with strong (1) as the positive class."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class EvalMetrics:
    accuracy: float
    recall: float
    f1: float
    precision: float


def evaluate(predictions, labels) -> tuple[ConfusionMatrix, EvalMetrics]:
    """Confusion counts and accuracy / recall / precision / F1.

    recall = tp/(tp+fn) and precision = tp/(tp+fp), each defined as 0 when
    the denominator is 0; F1 is the precision/recall harmonic mean, 0 when
    both are 0.
    """
    pred = np.asarray(predictions, dtype=np.int64)
    lab = np.asarray(labels, dtype=np.int64)
    if pred.shape != lab.shape or pred.ndim != 1:
        raise ValueError(f"predictions and labels must be equal-length 1-D, got {pred.shape} vs {lab.shape}")
    if pred.size == 0:
        raise ValueError("evaluate requires at least one row")
    bad = np.setdiff1d(np.union1d(pred, lab), [0, 1])
    if bad.size:
        raise ValueError(f"labels must be 0/1, found {bad.tolist()}")
    tp = int(np.sum((pred == 1) & (lab == 1)))
    fp = int(np.sum((pred == 1) & (lab == 0)))
    fn = int(np.sum((pred == 0) & (lab == 1)))
    tn = int(np.sum((pred == 0) & (lab == 0)))
    cm = ConfusionMatrix(tp, fp, fn, tn)
    accuracy = (tp + tn) / cm.total
    recall = tp / (tp + fn) if tp + fn else 0.0
    precision = tp / (tp + fp) if tp + fp else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return cm, EvalMetrics(accuracy=accuracy, recall=recall, f1=f1, precision=precision)
