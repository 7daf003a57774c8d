"""Stacked ensemble: decision tree and SVM bases with a logistic meta-learner.

Meta-features are out-of-fold base predictions over a seeded 5-fold
partition of the training set, so no row's meta-features come from a model
that saw it. The meta-learner (logistic regression) trains on those two
columns; the base models are then refit on the full training set for
inference. If a fold's training complement lacks a class, the partition is
redrawn with a new derived seed, up to 5 attempts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .logreg import LogisticRegression, LogRegParams
from .svm import SupportVectorMachine, SvmParams
from .tree import DecisionTree, TreeParams

N_FOLDS = 5
MAX_FOLD_ATTEMPTS = 5


@dataclass(frozen=True)
class StackingParams:
    dt: TreeParams = field(default_factory=TreeParams)
    svm: SvmParams = field(
        default_factory=lambda: SvmParams(C=0.1, kernel="linear", gamma="scale")
    )

    def to_dict(self) -> dict:
        return {"dt": self.dt.to_dict(), "svm": self.svm.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "StackingParams":
        return cls(TreeParams.from_dict(d["dt"]), SvmParams.from_dict(d["svm"]))


def fold_assignment(y: np.ndarray, seed: int, n_folds: int = N_FOLDS,
                    max_attempts: int = MAX_FOLD_ATTEMPTS) -> np.ndarray:
    """Seeded fold index per row; every fold's training complement must
    contain both classes. Redraws with a derived seed on failure."""
    n = len(y)
    for attempt in range(max_attempts):
        rng = np.random.default_rng(np.random.SeedSequence([seed, attempt]))
        perm = rng.permutation(n)
        folds = np.empty(n, dtype=np.int64)
        for f, chunk in enumerate(np.array_split(perm, n_folds)):
            folds[chunk] = f
        ok = all(
            len(np.unique(y[folds != f])) == 2 and np.any(folds == f)
            for f in range(n_folds)
        )
        if ok:
            return folds
    raise ValueError(
        f"could not draw a {n_folds}-fold partition with both classes in every "
        f"training complement after {max_attempts} attempts"
    )


def oof_meta_features(
    X: np.ndarray, y: np.ndarray, params: StackingParams, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Out-of-fold (dt, svm) prediction columns, one row per training row."""
    folds = fold_assignment(y, seed)
    meta = np.empty((len(y), 2), dtype=np.float64)
    for f in range(N_FOLDS):
        hold = folds == f
        rest = ~hold
        dt = DecisionTree(params.dt).fit(X[rest], y[rest])
        svm = SupportVectorMachine(params.svm, seed=seed).fit(X[rest], y[rest])
        meta[hold, 0] = dt.predict(X[hold])
        meta[hold, 1] = svm.predict(X[hold])
    return meta, folds


class StackingClassifier:
    def __init__(self, params: StackingParams | None = None, seed: int = 42):
        self.params = params or StackingParams()
        self.seed = seed
        self.dt: DecisionTree | None = None
        self.svm: SupportVectorMachine | None = None
        self.meta: LogisticRegression | None = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "StackingClassifier":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if X.ndim != 2 or len(X) == 0:
            raise ValueError("fit requires a non-empty 2-D feature matrix")
        if len(np.unique(y)) < 2:
            raise ValueError("training data must contain both classes")
        meta_X, _ = oof_meta_features(X, y, self.params, self.seed)
        self.meta = LogisticRegression(LogRegParams()).fit(meta_X, y)
        self.dt = DecisionTree(self.params.dt).fit(X, y)
        self.svm = SupportVectorMachine(self.params.svm, seed=self.seed).fit(X, y)
        return self

    def _meta_rows(self, X: np.ndarray) -> np.ndarray:
        if self.meta is None:
            raise RuntimeError("model is not fitted")
        return np.column_stack(
            [self.dt.predict(X).astype(np.float64), self.svm.predict(X).astype(np.float64)]
        )

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.meta.predict(self._meta_rows(X))

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return self.meta.predict_proba(self._meta_rows(X))

    def to_dict(self) -> dict:
        if self.meta is None:
            raise RuntimeError("model is not fitted")
        return {
            "params": self.params.to_dict(),
            "seed": self.seed,
            "dt": self.dt.to_dict(),
            "svm": self.svm.to_dict(),
            "meta": self.meta.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StackingClassifier":
        model = cls(StackingParams.from_dict(d["params"]), seed=d["seed"])
        model.dt = DecisionTree.from_dict(d["dt"])
        model.svm = SupportVectorMachine.from_dict(d["svm"])
        model.meta = LogisticRegression.from_dict(d["meta"])
        return model
