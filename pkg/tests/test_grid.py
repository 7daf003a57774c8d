from __future__ import annotations

import numpy as np
import pytest

from pwlab.learn.grid import DEFAULT_GRIDS, grid_search
from pwlab.learn.metrics import evaluate
from pwlab.learn.tree import DecisionTree, TreeParams


def make_sets(seed=0, n=400):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, 8))
    y = ((X[:, 0] > 0) & (X[:, 1] > 0)).astype(int)
    cut = int(0.8 * n)
    return X[:cut], y[:cut], X[cut:], y[cut:]


class TestEnumeration:
    def test_single_cell_returned(self):
        tx, ty, vx, vy = make_sets()
        result = grid_search("dt", {"criterion": ["gini"]}, tx, ty, vx, vy)
        assert result.best_params == {"criterion": "gini"}
        assert len(result.table) == 1

    def test_two_by_two_grid_fits_exactly_four_cells(self):
        tx, ty, vx, vy = make_sets()
        grid = {"criterion": ["gini", "entropy"], "max_depth": [2, None]}
        result = grid_search("dt", grid, tx, ty, vx, vy)
        assert len(result.table) == 4
        assert [c.cell_id for c in result.table] == [0, 1, 2, 3]
        # rightmost axis varies fastest in enumeration order
        assert [c.params for c in result.table] == [
            {"criterion": "gini", "max_depth": 2},
            {"criterion": "gini", "max_depth": None},
            {"criterion": "entropy", "max_depth": 2},
            {"criterion": "entropy", "max_depth": None},
        ]

    def test_argmax_verified_by_exhaustive_rescoring(self):
        tx, ty, vx, vy = make_sets(seed=1)
        grid = {"criterion": ["gini", "entropy"], "max_depth": [1, 3, None]}
        result = grid_search("dt", grid, tx, ty, vx, vy)
        rescored = []
        for cell in result.table:
            tree = DecisionTree(TreeParams(**cell.params)).fit(tx, ty)
            _, m = evaluate(tree.predict(vx), vy)
            rescored.append(m.f1)
            assert m.f1 == pytest.approx(cell.val_f1)
        best = result.table[result.best_cell_id]
        assert best.val_f1 == max(rescored)

    def test_tie_breaks_to_earliest_cell(self):
        tx, ty, vx, vy = make_sets(seed=2)
        # identical cells must tie; earliest wins
        result = grid_search("dt", {"criterion": ["gini", "gini"]}, tx, ty, vx, vy)
        assert result.table[0].val_f1 == result.table[1].val_f1
        assert result.best_cell_id == 0


class TestErrors:
    def test_empty_grid_rejected(self):
        tx, ty, vx, vy = make_sets()
        with pytest.raises(ValueError):
            grid_search("dt", {}, tx, ty, vx, vy)
        with pytest.raises(ValueError):
            grid_search("dt", {"criterion": []}, tx, ty, vx, vy)

    def test_failing_cell_scored_minus_one_not_fatal(self):
        tx, ty, vx, vy = make_sets(seed=3)
        # C=0 is invalid for logreg and must not abort the search
        result = grid_search("lr", {"C": [0.0, 1.0]}, tx, ty, vx, vy)
        assert result.table[0].val_f1 == -1.0
        assert result.table[1].val_f1 > -1.0
        assert result.best_cell_id == 1


class TestDefaults:
    def test_default_grids_cover_all_kinds(self):
        assert set(DEFAULT_GRIDS) == {"dt", "rf", "lr", "svm", "mlp", "stack"}

    def test_published_defaults_are_members_of_their_grids(self):
        assert "gini" in DEFAULT_GRIDS["dt"]["criterion"]
        assert None in DEFAULT_GRIDS["dt"]["max_depth"]
        assert 10 in DEFAULT_GRIDS["rf"]["n_estimators"]
        assert 20 in DEFAULT_GRIDS["rf"]["max_depth"]
        assert 1.0 in DEFAULT_GRIDS["lr"]["C"]
        assert 10.0 in DEFAULT_GRIDS["svm"]["C"]
        assert "rbf" in DEFAULT_GRIDS["svm"]["kernel"]
        assert [100] in DEFAULT_GRIDS["mlp"]["hidden_sizes"]
        assert 500 in DEFAULT_GRIDS["mlp"]["max_iter"]
        assert 0.1 in DEFAULT_GRIDS["stack"]["svm_C"]
