"""L2-regularized logistic regression fit by damped Newton iterations.

Minimizes (1/(2C))*||w||^2 + sum_i log(1 + exp(-s_i * (w.x_i + b))) with the
bias unregularized. The Newton system is tiny (d+1 unknowns), so it is
solved exactly; a backtracking line search keeps the loss monotonically
non-increasing. Iteration stops when the gradient max-norm drops below
1e-6 or after max_iter steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GRAD_TOL = 1e-6


@dataclass(frozen=True)
class LogRegParams:
    C: float = 1.0
    max_iter: int = 100
    solver: str = "newton"

    def __post_init__(self) -> None:
        if self.C <= 0:
            raise ValueError("C must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.solver != "newton":
            raise ValueError(f"unsupported solver {self.solver!r}")

    def to_dict(self) -> dict:
        return {"C": self.C, "max_iter": self.max_iter, "solver": self.solver}

    @classmethod
    def from_dict(cls, d: dict) -> "LogRegParams":
        return cls(**d)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class LogisticRegression:
    def __init__(self, params: LogRegParams | None = None):
        self.params = params or LogRegParams()
        self.weights: np.ndarray | None = None
        self.bias: float = 0.0
        self.loss_history_: list[float] = []

    def _loss(self, X: np.ndarray, t: np.ndarray, w: np.ndarray, b: float) -> float:
        z = X @ w + b
        # log(1 + e^z) - t*z, computed stably
        nll = float(np.sum(np.logaddexp(0.0, z) - t * z))
        return nll + 0.5 / self.params.C * float(w @ w)

    def fit(self, X: np.ndarray, y: np.ndarray) -> "LogisticRegression":
        X = np.asarray(X, dtype=np.float64)
        t = np.asarray(y, dtype=np.float64)
        if X.ndim != 2 or len(X) == 0:
            raise ValueError("fit requires a non-empty 2-D feature matrix")
        if not np.isfinite(X).all():
            raise ValueError("features must be finite")
        if len(np.unique(t)) < 2:
            raise ValueError("training data must contain both classes")
        n, d = X.shape
        w = np.zeros(d)
        b = 0.0
        loss = self._loss(X, t, w, b)
        self.loss_history_ = [loss]
        for _ in range(self.params.max_iter):
            z = X @ w + b
            p = _sigmoid(z)
            residual = p - t
            grad_w = X.T @ residual + w / self.params.C
            grad_b = float(residual.sum())
            grad = np.concatenate([grad_w, [grad_b]])
            if np.abs(grad).max() < GRAD_TOL:
                break
            r = p * (1.0 - p)
            H = np.empty((d + 1, d + 1))
            H[:d, :d] = (X.T * r) @ X + np.eye(d) / self.params.C
            H[:d, d] = H[d, :d] = X.T @ r
            H[d, d] = r.sum()
            try:
                step = np.linalg.solve(H, grad)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(H, grad, rcond=None)[0]
            # backtracking: halve until the regularized loss does not increase
            alpha = 1.0
            for _ in range(60):
                w_new = w - alpha * step[:d]
                b_new = b - alpha * step[d]
                new_loss = self._loss(X, t, w_new, b_new)
                if new_loss <= loss:
                    break
                alpha /= 2.0
            else:
                break  # no productive step remains
            w, b, loss = w_new, b_new, new_loss
            self.loss_history_.append(loss)
        self.weights = w
        self.bias = b
        return self

    def _scores(self, X: np.ndarray) -> np.ndarray:
        if self.weights is None:
            raise RuntimeError("model is not fitted")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.weights.shape[0]:
            raise ValueError(f"rows must have arity {self.weights.shape[0]}")
        return X @ self.weights + self.bias

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return _sigmoid(self._scores(X))

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)

    def to_dict(self) -> dict:
        if self.weights is None:
            raise RuntimeError("model is not fitted")
        return {
            "params": self.params.to_dict(),
            "weights": self.weights.tolist(),
            "bias": self.bias,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LogisticRegression":
        model = cls(LogRegParams.from_dict(d["params"]))
        model.weights = np.array(d["weights"], dtype=np.float64)
        model.bias = float(d["bias"])
        return model
