"""Random forest: bagged CART trees with per-split feature subsampling.

Each tree trains on a seeded bootstrap sample of the training set (same
size, drawn with replacement) and considers ceil(sqrt(d)) candidate features
per split. Prediction is a majority vote; an exact tie resolves to 0 (weak).
Per-tree seeds derive deterministically from (base seed, tree index), so a
fixed seed reproduces the forest bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tree import DecisionTree, TreeParams


@dataclass(frozen=True)
class ForestParams:
    n_estimators: int = 10
    criterion: str = "entropy"
    max_depth: int | None = 20
    min_samples_split: int = 10
    min_samples_leaf: int = 1

    def __post_init__(self) -> None:
        if self.n_estimators < 1:
            raise ValueError("n_estimators must be >= 1")
        TreeParams(self.criterion, self.max_depth, self.min_samples_split, self.min_samples_leaf)

    def tree_params(self) -> TreeParams:
        return TreeParams(self.criterion, self.max_depth, self.min_samples_split, self.min_samples_leaf)

    def to_dict(self) -> dict:
        return {
            "n_estimators": self.n_estimators,
            "criterion": self.criterion,
            "max_depth": self.max_depth,
            "min_samples_split": self.min_samples_split,
            "min_samples_leaf": self.min_samples_leaf,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ForestParams":
        return cls(**d)


class RandomForest:
    def __init__(self, params: ForestParams | None = None, seed: int = 42, *,
                 bootstrap: bool = True, max_features: int | str | None = "sqrt"):
        """bootstrap=False and max_features=None degrade a 1-tree forest to a
        plain DecisionTree; both exist as test hooks."""
        self.params = params or ForestParams()
        self.seed = seed
        self.bootstrap = bootstrap
        self.max_features = max_features
        self.trees: list[DecisionTree] = []

    def _resolve_max_features(self, d: int) -> int | None:
        if self.max_features == "sqrt":
            return math.ceil(math.sqrt(d))
        return self.max_features

    def fit(self, X: np.ndarray, y: np.ndarray) -> "RandomForest":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if X.ndim != 2 or len(X) == 0:
            raise ValueError("fit requires a non-empty 2-D feature matrix")
        n, d = X.shape
        mf = self._resolve_max_features(d)
        self.trees = []
        for i in range(self.params.n_estimators):
            rng = np.random.default_rng(np.random.SeedSequence([self.seed, i]))
            if self.bootstrap:
                idx = rng.integers(0, n, size=n)
                Xi, yi = X[idx], y[idx]
            else:
                Xi, yi = X, y
            tree = DecisionTree(self.params.tree_params())
            tree.fit(Xi, yi, max_features=mf, rng=rng if mf is not None else None)
            self.trees.append(tree)
        return self

    def _votes(self, X: np.ndarray) -> np.ndarray:
        if not self.trees:
            raise RuntimeError("forest is not fitted")
        return np.stack([tree.predict(X) for tree in self.trees])

    def predict(self, X: np.ndarray) -> np.ndarray:
        votes = self._votes(X).sum(axis=0)
        # strict majority for class 1; a tied vote is weak
        return (votes * 2 > len(self.trees)).astype(np.int64)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Fraction of trees voting strong."""
        return self._votes(X).mean(axis=0)

    def to_dict(self) -> dict:
        if not self.trees:
            raise RuntimeError("forest is not fitted")
        return {
            "params": self.params.to_dict(),
            "seed": self.seed,
            "bootstrap": self.bootstrap,
            "max_features": self.max_features,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RandomForest":
        forest = cls(
            ForestParams.from_dict(d["params"]),
            seed=d["seed"],
            bootstrap=d["bootstrap"],
            max_features=d["max_features"],
        )
        forest.trees = [DecisionTree.from_dict(t) for t in d["trees"]]
        if len(forest.trees) != forest.params.n_estimators:
            raise ValueError("tree count does not match n_estimators")
        return forest
