"""Soft-margin SVM trained by sequential minimal optimization.

The dual problem is optimized two multipliers at a time: each iteration
picks the maximal violating pair (the most KKT-violating coordinate from
above and below), solves that two-variable subproblem exactly, and repeats
until the violation gap drops below `tol` (default 1e-3) or the update cap
is reached. The bias is recovered from the final gap interval, which keeps
every point's KKT violation within tol at convergence.

Kernels: rbf k(x,z) = exp(-gamma * ||x-z||^2), with gamma = 1/(d * Var(X))
when set to "scale", and linear k(x,z) = x.z. Prediction returns the sign
of the kernel expansion plus bias; no probability is defined.

Training is O(n^2)-ish, so fits beyond `max_train_size` rows are refused
with an instruction to subsample.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TRAIN_CAP = 20_000
ALPHA_EPS = 1e-7
BOUND_EPS = 1e-8  # alphas this close to a box bound are snapped onto it


@dataclass(frozen=True)
class SvmParams:
    C: float = 10.0
    kernel: str = "rbf"
    gamma: float | str = "scale"
    tol: float = 1e-3
    max_iter: int = 200_000

    def __post_init__(self) -> None:
        if self.C <= 0:
            raise ValueError("C must be > 0")
        if self.kernel not in ("rbf", "linear"):
            raise ValueError(f"kernel must be rbf or linear, got {self.kernel!r}")
        if isinstance(self.gamma, str):
            if self.gamma != "scale":
                raise ValueError("gamma must be 'scale' or a positive number")
        elif self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")

    def to_dict(self) -> dict:
        return {
            "C": self.C,
            "kernel": self.kernel,
            "gamma": self.gamma,
            "tol": self.tol,
            "max_iter": self.max_iter,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SvmParams":
        return cls(**d)


def resolve_gamma(params: SvmParams, X: np.ndarray) -> float:
    """Numeric gamma for this training matrix; 'scale' is 1/(d * Var(X))."""
    if params.kernel == "linear":
        return 0.0
    if params.gamma == "scale":
        var = float(np.asarray(X, dtype=np.float64).var())
        return 1.0 / (X.shape[1] * var) if var > 0 else 1.0
    return float(params.gamma)


def kernel_matrix(kind: str, gamma: float, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """K[i, j] = k(A[i], B[j])."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if kind == "linear":
        return A @ B.T
    sq = (
        (A * A).sum(axis=1)[:, None]
        + (B * B).sum(axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


class SupportVectorMachine:
    def __init__(self, params: SvmParams | None = None, seed: int = 42,
                 max_train_size: int = DEFAULT_TRAIN_CAP):
        self.params = params or SvmParams()
        self.seed = seed
        self.max_train_size = max_train_size
        self.support_vectors: np.ndarray | None = None
        self.dual_coef: np.ndarray | None = None  # alpha_i * y_i over support vectors
        self.bias: float = 0.0
        self.gamma_: float = 0.0
        self.n_features_: int = 0
        self.kkt_violation_: float = float("inf")
        self.n_iter_: int = 0

    # --- training ---

    def fit(self, X: np.ndarray, y: np.ndarray) -> "SupportVectorMachine":
        X = np.asarray(X, dtype=np.float64)
        y01 = np.asarray(y, dtype=np.int64)
        if X.ndim != 2 or len(X) == 0:
            raise ValueError("fit requires a non-empty 2-D feature matrix")
        if not np.isfinite(X).all():
            raise ValueError("features must be finite")
        if len(X) > self.max_train_size:
            raise ValueError(
                f"training set has {len(X)} rows, above the cap of {self.max_train_size}; "
                "subsample the training set before fitting"
            )
        if len(np.unique(y01)) < 2:
            raise ValueError("training data must contain both classes")
        n, d = X.shape
        self.n_features_ = d
        self.gamma_ = resolve_gamma(self.params, X)
        ys = np.where(y01 == 1, 1.0, -1.0)
        C = float(self.params.C)
        tol = self.params.tol
        linear = self.params.kernel == "linear"
        sq_norms = None if linear else (X * X).sum(axis=1)

        def kcol(i: int) -> np.ndarray:
            if linear:
                return X @ X[i]
            sq = sq_norms + sq_norms[i] - 2.0 * (X @ X[i])
            np.maximum(sq, 0.0, out=sq)
            return np.exp(-self.gamma_ * sq)

        alpha = np.zeros(n)
        # bias-free margin error: e_i = sum_j alpha_j y_j K_ij - y_i
        errors = -ys.copy()

        def take_step(i1: int, i2: int) -> bool:
            nonlocal errors
            a1, a2 = alpha[i1], alpha[i2]
            y1, y2 = ys[i1], ys[i2]
            e1, e2 = errors[i1], errors[i2]
            s = y1 * y2
            if s < 0:
                lo, hi = max(0.0, a2 - a1), min(C, C + a2 - a1)
            else:
                lo, hi = max(0.0, a1 + a2 - C), min(C, a1 + a2)
            if lo >= hi:
                return False
            col1 = kcol(i1)
            col2 = kcol(i2)
            k11, k12, k22 = col1[i1], col1[i2], col2[i2]
            eta = k11 + k22 - 2.0 * k12
            if eta > 0:
                a2_new = min(max(a2 + y2 * (e1 - e2) / eta, lo), hi)
            else:
                # flat or concave direction: the dual objective is maximized
                # at one of the clip bounds
                v1 = e1 + y1 - y1 * a1 * k11 - y2 * a2 * k12
                v2 = e2 + y2 - y1 * a1 * k12 - y2 * a2 * k22

                def objective(a2p: float) -> float:
                    a1p = a1 + s * (a2 - a2p)
                    return (
                        a1p
                        + a2p
                        - 0.5 * k11 * a1p * a1p
                        - 0.5 * k22 * a2p * a2p
                        - s * k12 * a1p * a2p
                        - y1 * a1p * v1
                        - y2 * a2p * v2
                    )

                obj_lo, obj_hi = objective(lo), objective(hi)
                if obj_lo > obj_hi + ALPHA_EPS:
                    a2_new = lo
                elif obj_hi > obj_lo + ALPHA_EPS:
                    a2_new = hi
                else:
                    return False
            if abs(a2_new - a2) < ALPHA_EPS * (a2 + a2_new + ALPHA_EPS):
                return False
            if a2_new < BOUND_EPS:
                a2_new = 0.0
            elif a2_new > C - BOUND_EPS:
                a2_new = C
            a1_new = a1 + s * (a2 - a2_new)
            if a1_new < BOUND_EPS:
                a1_new = 0.0
            elif a1_new > C - BOUND_EPS:
                a1_new = C
            d1 = y1 * (a1_new - a1)
            d2 = y2 * (a2_new - a2)
            errors += d1 * col1 + d2 * col2
            alpha[i1], alpha[i2] = a1_new, a2_new
            return True

        # maximal-violating-pair loop; F_i = y_i - (f_i without bias) = -e_i
        gap = np.inf
        iterations = 0
        while iterations < self.params.max_iter:
            up = ((ys > 0) & (alpha < C - BOUND_EPS)) | ((ys < 0) & (alpha > BOUND_EPS))
            low = ((ys < 0) & (alpha < C - BOUND_EPS)) | ((ys > 0) & (alpha > BOUND_EPS))
            F = -errors
            if not up.any() or not low.any():
                gap = 0.0
                break
            up_idx = np.flatnonzero(up)
            low_idx = np.flatnonzero(low)
            i = int(up_idx[np.argmax(F[up_idx])])
            j = int(low_idx[np.argmin(F[low_idx])])
            gap = F[i] - F[j]
            if gap <= tol:
                break
            if not take_step(i, j):
                # the top pair cannot move (degenerate direction); try the
                # next-worst partners before giving up
                moved = False
                order = low_idx[np.argsort(F[low_idx])]
                for j2 in order[: min(len(order), 50)]:
                    if int(j2) != i and take_step(i, int(j2)):
                        moved = True
                        break
                if not moved:
                    order = up_idx[np.argsort(-F[up_idx])]
                    for i2 in order[: min(len(order), 50)]:
                        if int(i2) != j and take_step(int(i2), j):
                            moved = True
                            break
                if not moved:
                    break
            iterations += 1
        self.n_iter_ = iterations

        # bias sits mid-gap, splitting the residual violation evenly
        up = ((ys > 0) & (alpha < C - BOUND_EPS)) | ((ys < 0) & (alpha > BOUND_EPS))
        low = ((ys < 0) & (alpha < C - BOUND_EPS)) | ((ys > 0) & (alpha > BOUND_EPS))
        F = -errors
        if up.any() and low.any():
            b = (F[up].max() + F[low].min()) / 2.0
        elif up.any():
            b = F[up].max()
        elif low.any():
            b = F[low].min()
        else:
            b = 0.0

        r = ys * (errors + ys + b) - 1.0  # y*f - 1 with the final bias
        violation = np.where(
            alpha <= BOUND_EPS, np.maximum(0.0, -r),
            np.where(alpha >= C - BOUND_EPS, np.maximum(0.0, r), np.abs(r)),
        )
        self.kkt_violation_ = float(violation.max())
        self.alpha_ = alpha
        sv = alpha > BOUND_EPS
        self.support_vectors = X[sv].copy()
        self.dual_coef = (alpha[sv] * ys[sv]).copy()
        self.bias = float(b)
        return self

    # --- inference ---

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        if self.support_vectors is None:
            raise RuntimeError("model is not fitted")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_:
            raise ValueError(f"rows must have arity {self.n_features_}")
        if len(self.support_vectors) == 0:
            return np.full(len(X), self.bias)
        K = kernel_matrix(self.params.kernel, self.gamma_, X, self.support_vectors)
        return K @ self.dual_coef + self.bias

    def predict(self, X: np.ndarray) -> np.ndarray:
        # a margin of exactly zero resolves to weak
        return (self.decision_function(X) > 0).astype(np.int64)

    def to_dict(self) -> dict:
        if self.support_vectors is None:
            raise RuntimeError("model is not fitted")
        return {
            "params": self.params.to_dict(),
            "seed": self.seed,
            "gamma_resolved": self.gamma_,
            "n_features": self.n_features_,
            "support_vectors": self.support_vectors.tolist(),
            "dual_coef": self.dual_coef.tolist(),
            "bias": self.bias,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SupportVectorMachine":
        model = cls(SvmParams.from_dict(d["params"]), seed=d["seed"])
        model.gamma_ = float(d["gamma_resolved"])
        model.n_features_ = int(d["n_features"])
        model.support_vectors = np.array(d["support_vectors"], dtype=np.float64).reshape(
            -1, model.n_features_
        )
        model.dual_coef = np.array(d["dual_coef"], dtype=np.float64)
        model.bias = float(d["bias"])
        return model
