"""Exhaustive hyperparameter search scored on a held-out validation split.

Every cell of the Cartesian product is fitted on the training split and
scored by F1 on the validation split; the argmax wins, with ties broken by
the earliest cell in enumeration order (itertools.product over the grid's
insertion order, rightmost axis fastest). A cell whose fit raises is
recorded with score -1 rather than aborting the search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import build_params, make_estimator
from .metrics import evaluate

DEFAULT_GRIDS: dict[str, dict[str, list]] = {
    "dt": {"criterion": ["gini", "entropy"], "max_depth": [5, 10, 20, None]},
    "rf": {"criterion": ["entropy", "gini"], "max_depth": [10, 20], "n_estimators": [10, 30]},
    "lr": {"C": [0.1, 1.0, 10.0]},
    "svm": {"C": [0.1, 1.0, 10.0], "kernel": ["rbf", "linear"]},
    "mlp": {"hidden_sizes": [[50], [100]], "max_iter": [200, 500]},
    "stack": {"svm_C": [0.1, 1.0], "dt_criterion": ["gini", "entropy"]},
}


@dataclass(frozen=True)
class GridCell:
    cell_id: int
    params: dict
    val_f1: float
    val_accuracy: float
    val_recall: float


@dataclass(frozen=True)
class GridSearchResult:
    best_cell_id: int
    best_params: dict
    table: list[GridCell]


def grid_search(
    kind: str,
    grid: dict[str, list],
    train_X: np.ndarray,
    train_y: np.ndarray,
    val_X: np.ndarray,
    val_y: np.ndarray,
    seed: int = 42,
) -> GridSearchResult:
    if not grid or any(len(v) == 0 for v in grid.values()):
        raise ValueError("grid must map parameter names to non-empty candidate lists")
    names = list(grid.keys())
    table: list[GridCell] = []
    best_id = -1
    best_f1 = -np.inf
    for cell_id, values in enumerate(itertools.product(*(grid[n] for n in names))):
        cell = dict(zip(names, values))
        try:
            params = build_params(kind, _coerce_cell(cell))
            estimator = make_estimator(kind, params, seed=seed)
            estimator.fit(train_X, train_y)
            _, m = evaluate(estimator.predict(val_X), val_y)
            row = GridCell(cell_id, cell, m.f1, m.accuracy, m.recall)
        except Exception:
            row = GridCell(cell_id, cell, -1.0, -1.0, -1.0)
        table.append(row)
        if row.val_f1 > best_f1:
            best_f1 = row.val_f1
            best_id = cell_id
    return GridSearchResult(best_id, table[best_id].params, table)


def _coerce_cell(cell: dict) -> dict:
    """JSON grids express tuples as lists; normalize those values."""
    out = dict(cell)
    if isinstance(out.get("hidden_sizes"), list):
        out["hidden_sizes"] = tuple(out["hidden_sizes"])
    return out
