"""Multilayer perceptron for binary classification, trained with Adam.

Architecture: configurable relu hidden layers (default one layer of 100
units) and a single sigmoid output trained on binary cross-entropy.
Optimization uses mini-batches of 200 with Adam (step 1e-3, decay rates
0.9/0.999, epsilon 1e-8) for at most max_iter epochs, stopping early once
the epoch loss fails to drop by more than 1e-3 over a 10-epoch window.
Weights initialize uniformly in +/- sqrt(6 / (fan_in + fan_out)) from the
model seed, so training is reproducible bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LEARNING_RATE = 1e-3
BETA1 = 0.9
BETA2 = 0.999
ADAM_EPS = 1e-8
BATCH_SIZE = 200
NO_IMPROVE_WINDOW = 10
IMPROVE_TOL = 1e-3


@dataclass(frozen=True)
class MlpParams:
    hidden_sizes: tuple[int, ...] = (100,)
    activation: str = "relu"
    max_iter: int = 500
    optimizer: str = "adam"

    def __post_init__(self) -> None:
        object.__setattr__(self, "hidden_sizes", tuple(int(h) for h in self.hidden_sizes))
        if not self.hidden_sizes or any(h < 1 for h in self.hidden_sizes):
            raise ValueError("hidden_sizes must be non-empty positive counts")
        if self.activation != "relu":
            raise ValueError("only relu activation is supported")
        if self.optimizer != "adam":
            raise ValueError("only the adam optimizer is supported")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")

    def to_dict(self) -> dict:
        return {
            "hidden_sizes": list(self.hidden_sizes),
            "activation": self.activation,
            "max_iter": self.max_iter,
            "optimizer": self.optimizer,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MlpParams":
        return cls(tuple(d["hidden_sizes"]), d["activation"], d["max_iter"], d["optimizer"])


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class MlpClassifier:
    def __init__(self, params: MlpParams | None = None, seed: int = 42):
        self.params = params or MlpParams()
        self.seed = seed
        self.weights: list[np.ndarray] | None = None
        self.biases: list[np.ndarray] | None = None
        self.loss_history_: list[float] = []

    def _init_parameters(self, n_features: int, rng: np.random.Generator) -> None:
        sizes = (n_features,) + self.params.hidden_sizes + (1,)
        self.weights = []
        self.biases = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            self.weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            self.biases.append(np.zeros(fan_out))

    def _forward(self, X: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
        """Hidden activations (inputs to each layer) and the output logits."""
        activations = [X]
        a = X
        for W, b in zip(self.weights[:-1], self.biases[:-1]):
            a = np.maximum(a @ W + b, 0.0)
            activations.append(a)
        logits = a @ self.weights[-1] + self.biases[-1]
        return activations, logits.ravel()

    def loss_and_grads(
        self, X: np.ndarray, y: np.ndarray
    ) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
        """Mean binary cross-entropy on (X, y) and its gradients with respect
        to every weight matrix and bias vector."""
        X = np.asarray(X, dtype=np.float64)
        t = np.asarray(y, dtype=np.float64)
        n = len(X)
        activations, logits = self._forward(X)
        # mean(softplus(z) - t*z) == mean BCE, stable for large |z|
        loss = float(np.mean(np.logaddexp(0.0, logits) - t * logits))
        delta = ((_sigmoid(logits) - t) / n)[:, None]
        grads_w: list[np.ndarray] = [None] * len(self.weights)
        grads_b: list[np.ndarray] = [None] * len(self.biases)
        for layer in range(len(self.weights) - 1, -1, -1):
            grads_w[layer] = activations[layer].T @ delta
            grads_b[layer] = delta.sum(axis=0)
            if layer > 0:
                delta = (delta @ self.weights[layer].T) * (activations[layer] > 0)
        return loss, grads_w, grads_b

    def fit(self, X: np.ndarray, y: np.ndarray) -> "MlpClassifier":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if X.ndim != 2 or len(X) == 0:
            raise ValueError("fit requires a non-empty 2-D feature matrix")
        if not np.isfinite(X).all():
            raise ValueError("features must be finite")
        n = len(X)
        rng = np.random.default_rng(self.seed)
        self._init_parameters(X.shape[1], rng)
        m_w = [np.zeros_like(w) for w in self.weights]
        v_w = [np.zeros_like(w) for w in self.weights]
        m_b = [np.zeros_like(b) for b in self.biases]
        v_b = [np.zeros_like(b) for b in self.biases]
        step = 0
        self.loss_history_ = []
        for _ in range(self.params.max_iter):
            order = rng.permutation(n)
            epoch_loss = 0.0
            for start in range(0, n, BATCH_SIZE):
                batch = order[start : start + BATCH_SIZE]
                loss, grads_w, grads_b = self.loss_and_grads(X[batch], y[batch])
                epoch_loss += loss * len(batch)
                step += 1
                corr1 = 1.0 - BETA1**step
                corr2 = 1.0 - BETA2**step
                for i in range(len(self.weights)):
                    for param, grad, m, v in (
                        (self.weights[i], grads_w[i], m_w[i], v_w[i]),
                        (self.biases[i], grads_b[i], m_b[i], v_b[i]),
                    ):
                        m *= BETA1
                        m += (1.0 - BETA1) * grad
                        v *= BETA2
                        v += (1.0 - BETA2) * grad * grad
                        param -= LEARNING_RATE * (m / corr1) / (np.sqrt(v / corr2) + ADAM_EPS)
            epoch_loss /= n
            if not np.isfinite(epoch_loss):
                raise ArithmeticError("training diverged: loss is not finite")
            self.loss_history_.append(epoch_loss)
            if (
                len(self.loss_history_) > NO_IMPROVE_WINDOW
                and self.loss_history_[-1]
                > self.loss_history_[-1 - NO_IMPROVE_WINDOW] - IMPROVE_TOL
            ):
                break
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if self.weights is None:
            raise RuntimeError("model is not fitted")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.weights[0].shape[0]:
            raise ValueError(f"rows must have arity {self.weights[0].shape[0]}")
        _, logits = self._forward(X)
        return _sigmoid(logits)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)

    def to_dict(self) -> dict:
        if self.weights is None:
            raise RuntimeError("model is not fitted")
        return {
            "params": self.params.to_dict(),
            "seed": self.seed,
            "weights": [w.tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MlpClassifier":
        model = cls(MlpParams.from_dict(d["params"]), seed=d["seed"])
        model.weights = [np.array(w, dtype=np.float64) for w in d["weights"]]
        model.biases = [np.array(b, dtype=np.float64) for b in d["biases"]]
        return model
