"""CART decision tree for binary labels on numeric features.

Splits are axis-aligned thresholds at midpoints between consecutive distinct
sorted feature values, chosen to maximize impurity decrease (gini or
entropy). Ties break toward the lowest feature index, then the lowest
threshold, so fitting is fully deterministic. Leaves predict the majority
class, with exact ties resolving to 0 (weak).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TreeParams:
    criterion: str = "gini"
    max_depth: int | None = None
    min_samples_split: int = 2
    min_samples_leaf: int = 1

    def __post_init__(self) -> None:
        if self.criterion not in ("gini", "entropy"):
            raise ValueError(f"criterion must be gini or entropy, got {self.criterion!r}")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be >= 0 or None")
        if self.min_samples_split < 2 or self.min_samples_leaf < 1:
            raise ValueError("min_samples_split >= 2 and min_samples_leaf >= 1 required")

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "max_depth": self.max_depth,
            "min_samples_split": self.min_samples_split,
            "min_samples_leaf": self.min_samples_leaf,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TreeParams":
        return cls(**d)


def _impurity(n: np.ndarray, pos: np.ndarray, criterion: str) -> np.ndarray:
    """Vectorized node impurity for node sizes n with pos positives."""
    n = np.asarray(n, dtype=np.float64)
    p = np.divide(pos, n, out=np.zeros_like(n), where=n > 0)
    if criterion == "gini":
        return 2.0 * p * (1.0 - p)
    q = 1.0 - p
    log_p = np.where(p > 0, np.log2(np.where(p > 0, p, 1.0)), 0.0)
    log_q = np.where(q > 0, np.log2(np.where(q > 0, q, 1.0)), 0.0)
    return -(p * log_p + q * log_q)


def _best_split(
    X: np.ndarray,
    y: np.ndarray,
    criterion: str,
    min_samples_leaf: int,
    feature_indices: np.ndarray,
) -> tuple[int, float, float] | None:
    """Best (feature, threshold, decrease) over the candidate features,
    or None when no split satisfies min_samples_leaf."""
    n = len(y)
    total_pos = int(y.sum())
    parent_imp = float(_impurity(np.array([n]), np.array([total_pos]), criterion)[0])
    best: tuple[float, int, float] | None = None  # (-decrease placeholder handled manually)
    for j in feature_indices:
        order = np.argsort(X[:, j], kind="stable")
        v = X[order, j]
        cum_pos = np.cumsum(y[order])
        boundary = np.flatnonzero(v[:-1] != v[1:])
        if boundary.size == 0:
            continue
        n_left = boundary + 1
        n_right = n - n_left
        ok = (n_left >= min_samples_leaf) & (n_right >= min_samples_leaf)
        if not ok.any():
            continue
        boundary = boundary[ok]
        n_left = n_left[ok]
        n_right = n_right[ok]
        pos_left = cum_pos[boundary]
        pos_right = total_pos - pos_left
        child_imp = (
            n_left * _impurity(n_left, pos_left, criterion)
            + n_right * _impurity(n_right, pos_right, criterion)
        ) / n
        decrease = parent_imp - child_imp
        k = int(np.argmax(decrease))  # first max -> lowest threshold
        if best is None or decrease[k] > best[0]:
            threshold = (v[boundary[k]] + v[boundary[k] + 1]) / 2.0
            best = (float(decrease[k]), int(j), float(threshold))
    if best is None:
        return None
    return best[1], best[2], best[0]


class DecisionTree:
    """Binary CART classifier. Nodes are plain dicts, which keeps the fitted
    structure directly JSON-serializable."""

    def __init__(self, params: TreeParams | None = None):
        self.params = params or TreeParams()
        self.root: dict | None = None

    def fit(self, X: np.ndarray, y: np.ndarray, *, max_features: int | None = None,
            rng: np.random.Generator | None = None) -> "DecisionTree":
        """Grow the tree. max_features (with rng) subsamples candidate
        features at each split; this is the random-forest hook and is off by
        default."""
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if X.ndim != 2 or len(X) == 0:
            raise ValueError("fit requires a non-empty 2-D feature matrix")
        if y.shape != (X.shape[0],):
            raise ValueError("y length must match X rows")
        if not np.isfinite(X).all():
            raise ValueError("features must be finite")
        if max_features is not None and rng is None:
            raise ValueError("max_features requires an rng")
        d = X.shape[1]
        p = self.params

        def grow(idx: np.ndarray, depth: int) -> dict:
            sub_y = y[idx]
            n1 = int(sub_y.sum())
            n0 = len(idx) - n1
            if (
                n0 == 0
                or n1 == 0
                or (p.max_depth is not None and depth >= p.max_depth)
                or len(idx) < p.min_samples_split
            ):
                return {"kind": "leaf", "n0": n0, "n1": n1}
            if max_features is not None and max_features < d:
                feats = np.sort(rng.choice(d, size=max_features, replace=False))
            else:
                feats = np.arange(d)
            found = _best_split(X[idx], sub_y, p.criterion, p.min_samples_leaf, feats)
            if found is None:
                return {"kind": "leaf", "n0": n0, "n1": n1}
            feature, threshold, _ = found
            mask = X[idx, feature] <= threshold
            return {
                "kind": "split",
                "feature": feature,
                "threshold": threshold,
                "left": grow(idx[mask], depth + 1),
                "right": grow(idx[~mask], depth + 1),
            }

        self.root = grow(np.arange(len(y)), 0)
        return self

    def _leaf_for(self, row: np.ndarray) -> dict:
        node = self.root
        while node["kind"] == "split":
            node = node["left"] if row[node["feature"]] <= node["threshold"] else node["right"]
        return node

    def _check_rows(self, X: np.ndarray) -> np.ndarray:
        if self.root is None:
            raise RuntimeError("tree is not fitted")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError("predict expects a 2-D matrix")
        return X

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = self._check_rows(X)
        out = np.empty(len(X), dtype=np.int64)
        for i, row in enumerate(X):
            leaf = self._leaf_for(row)
            out[i] = 1 if leaf["n1"] > leaf["n0"] else 0
        return out

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Positive-class fraction of the reached leaf."""
        X = self._check_rows(X)
        out = np.empty(len(X), dtype=np.float64)
        for i, row in enumerate(X):
            leaf = self._leaf_for(row)
            out[i] = leaf["n1"] / (leaf["n0"] + leaf["n1"])
        return out

    def to_dict(self) -> dict:
        if self.root is None:
            raise RuntimeError("tree is not fitted")
        return {"params": self.params.to_dict(), "root": self.root}

    @classmethod
    def from_dict(cls, d: dict) -> "DecisionTree":
        tree = cls(TreeParams.from_dict(d["params"]))
        tree.root = d["root"]
        return tree
