"""The six password-strength classifiers and their shared training surface.

Model kinds and their hyperparameter defaults:

    dt     decision tree        gini, unlimited depth, leaf 1, split 2
    rf     random forest        entropy, depth 20, split 10, 10 trees
    lr     logistic regression  C=1, 100 Newton iterations
    svm    support vector       C=10, rbf kernel, gamma scale
    mlp    neural network       relu, one hidden layer of 100, 500 epochs
    stack  stacked ensemble     dt + linear svm (C=0.1) bases, logistic meta

fit_model trains any kind on pre-scaled rows and wraps it in a TrainedModel
that carries the scaler and training metadata for the persistence layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..features import ScalerParams
from .forest import ForestParams, RandomForest
from .logreg import LogisticRegression, LogRegParams
from .metrics import ConfusionMatrix, EvalMetrics, evaluate
from .mlp import MlpClassifier, MlpParams
from .stacking import StackingClassifier, StackingParams
from .svm import SupportVectorMachine, SvmParams
from .tree import DecisionTree, TreeParams

__all__ = [
    "MODEL_KINDS",
    "ConfusionMatrix",
    "DecisionTree",
    "EvalMetrics",
    "ForestParams",
    "LogisticRegression",
    "LogRegParams",
    "MlpClassifier",
    "MlpParams",
    "RandomForest",
    "StackingClassifier",
    "StackingParams",
    "SupportVectorMachine",
    "SvmParams",
    "TrainedModel",
    "TreeParams",
    "build_params",
    "evaluate",
    "fit_model",
    "make_estimator",
]

MODEL_KINDS = ("dt", "rf", "lr", "svm", "mlp", "stack")

_PARAM_TYPES = {
    "dt": TreeParams,
    "rf": ForestParams,
    "lr": LogRegParams,
    "svm": SvmParams,
    "mlp": MlpParams,
}

_ESTIMATOR_TYPES = {
    "dt": DecisionTree,
    "rf": RandomForest,
    "lr": LogisticRegression,
    "svm": SupportVectorMachine,
    "mlp": MlpClassifier,
    "stack": StackingClassifier,
}


def build_params(kind: str, overrides: dict[str, Any] | None = None):
    """Hyperparameter object for a model kind with defaults overridden.

    Stacking accepts the flat dt_/svm_ prefixed names (dt_criterion,
    svm_C, ...)."""
    overrides = dict(overrides or {})
    if kind == "stack":
        dt_over = {k[3:]: v for k, v in overrides.items() if k.startswith("dt_")}
        svm_over = {k[4:]: v for k, v in overrides.items() if k.startswith("svm_")}
        stray = [k for k in overrides if not (k.startswith("dt_") or k.startswith("svm_"))]
        if stray:
            raise ValueError(f"unknown stacking parameters: {stray}")
        defaults = StackingParams()
        return StackingParams(
            dt=TreeParams(**{**defaults.dt.to_dict(), **dt_over}),
            svm=SvmParams(**{**defaults.svm.to_dict(), **svm_over}),
        )
    if kind not in _PARAM_TYPES:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")
    cls = _PARAM_TYPES[kind]
    base = cls().to_dict()
    unknown = [k for k in overrides if k not in base]
    if unknown:
        raise ValueError(f"unknown {kind} parameters: {unknown}")
    if kind == "mlp" and "hidden_sizes" in overrides and isinstance(overrides["hidden_sizes"], int):
        overrides["hidden_sizes"] = (overrides["hidden_sizes"],)
    return cls.from_dict({**base, **overrides})


def make_estimator(kind: str, params=None, seed: int = 42):
    if kind == "dt":
        return DecisionTree(params)
    if kind == "rf":
        return RandomForest(params, seed=seed)
    if kind == "lr":
        return LogisticRegression(params)
    if kind == "svm":
        return SupportVectorMachine(params, seed=seed)
    if kind == "mlp":
        return MlpClassifier(params, seed=seed)
    if kind == "stack":
        return StackingClassifier(params, seed=seed)
    raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")


@dataclass
class TrainedModel:
    """A fitted classifier of any kind plus the scaler it was trained behind."""

    kind: str
    estimator: Any
    scaler: ScalerParams
    metadata: dict = field(default_factory=dict)

    @property
    def hyperparams(self) -> dict:
        return self.estimator.params.to_dict()

    @property
    def has_probability(self) -> bool:
        return self.kind != "svm"

    def _check(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[1] != len(self.scaler.mean):
            raise ValueError(f"rows must have arity {len(self.scaler.mean)}")
        return rows

    def predict(self, rows: np.ndarray) -> np.ndarray:
        """Labels for pre-scaled rows (callers apply self.scaler first)."""
        rows = self._check(rows)
        if len(rows) == 0:
            return np.empty(0, dtype=np.int64)
        return self.estimator.predict(rows)

    def predict_proba(self, rows: np.ndarray) -> np.ndarray | None:
        """Strong-class probability, or None for kinds without one (svm)."""
        if not self.has_probability:
            return None
        rows = self._check(rows)
        if len(rows) == 0:
            return np.empty(0, dtype=np.float64)
        return self.estimator.predict_proba(rows)


def fit_model(
    kind: str,
    X: np.ndarray,
    y: np.ndarray,
    scaler: ScalerParams,
    params=None,
    seed: int = 42,
    metadata: dict | None = None,
) -> TrainedModel:
    """Fit one classifier kind on pre-scaled training rows."""
    estimator = make_estimator(kind, params, seed=seed)
    estimator.fit(X, y)
    return TrainedModel(kind=kind, estimator=estimator, scaler=scaler, metadata=dict(metadata or {}))
