"""Numeric password features, the strength labeling rule, normalization,
dataset splitting, and class balancing.

The eight predictor features per password:

    length                 total character count
    num_digits             characters in class D
    num_lowercase          characters in class L
    num_uppercase          characters in class U
    num_special_chars      characters in class S
    char_repeat            length minus distinct-character count
    max_consecutive_chars  longest run of one identical character
    char_type_changes      adjacent positions whose classes differ

A password is labeled strong (1) iff its length is at least 9 and at least
three of the four character classes are present; otherwise weak (0).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .chars import char_class

FEATURE_NAMES = (
    "length",
    "num_digits",
    "num_lowercase",
    "num_uppercase",
    "num_special_chars",
    "char_repeat",
    "max_consecutive_chars",
    "char_type_changes",
)
LABEL_NAME = "password_strength"
CSV_HEADER = ",".join(FEATURE_NAMES + (LABEL_NAME,))

STRONG_MIN_LENGTH = 9
STRONG_MIN_CLASSES = 3


@dataclass(frozen=True)
class FeatureVector:
    length: int
    num_digits: int
    num_lowercase: int
    num_uppercase: int
    num_special_chars: int
    char_repeat: int
    max_consecutive_chars: int
    char_type_changes: int

    def as_row(self) -> list[int]:
        return [getattr(self, name) for name in FEATURE_NAMES]


def extract_features(password: str) -> FeatureVector:
    """Compute the eight features for one legal password."""
    classes = [char_class(ch) for ch in password]
    n = len(password)
    max_run = 1
    run = 1
    for i in range(1, n):
        if password[i] == password[i - 1]:
            run += 1
            if run > max_run:
                max_run = run
        else:
            run = 1
    return FeatureVector(
        length=n,
        num_digits=classes.count("D"),
        num_lowercase=classes.count("L"),
        num_uppercase=classes.count("U"),
        num_special_chars=classes.count("S"),
        char_repeat=n - len(set(password)),
        max_consecutive_chars=max_run,
        char_type_changes=sum(1 for i in range(1, n) if classes[i] != classes[i - 1]),
    )


def label(fv: FeatureVector) -> int:
    """Strength label: 1 iff length >= 9 and >= 3 character classes present."""
    n_classes = sum(
        1
        for c in (fv.num_digits, fv.num_lowercase, fv.num_uppercase, fv.num_special_chars)
        if c > 0
    )
    return int(fv.length >= STRONG_MIN_LENGTH and n_classes >= STRONG_MIN_CLASSES)


def failed_rules(fv: FeatureVector) -> list[str]:
    """Which of the two strength-rule conditions a password misses."""
    out = []
    if fv.length < STRONG_MIN_LENGTH:
        out.append("length_lt_9")
    n_classes = sum(
        1
        for c in (fv.num_digits, fv.num_lowercase, fv.num_uppercase, fv.num_special_chars)
        if c > 0
    )
    if n_classes < STRONG_MIN_CLASSES:
        out.append("class_count_lt_3")
    return out


@dataclass
class LabeledDataset:
    """Feature matrix (n x 8) with labels; provenance tracks the pipeline stage."""

    X: np.ndarray
    y: np.ndarray
    provenance: str = "raw"
    scaler: "ScalerParams | None" = None

    def __post_init__(self) -> None:
        self.X = np.asarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.X.ndim != 2 or self.X.shape[1] != len(FEATURE_NAMES):
            raise ValueError(f"X must be (n, {len(FEATURE_NAMES)}), got {self.X.shape}")
        if self.y.shape != (self.X.shape[0],):
            raise ValueError("y length must match X rows")

    def __len__(self) -> int:
        return self.X.shape[0]


def featurize(passwords: list[str]) -> LabeledDataset:
    """Extract features and rule labels for a list of unique passwords."""
    rows = np.empty((len(passwords), len(FEATURE_NAMES)), dtype=np.float64)
    labels = np.empty(len(passwords), dtype=np.int64)
    for i, pw in enumerate(passwords):
        fv = extract_features(pw)
        rows[i] = fv.as_row()
        labels[i] = label(fv)
    return LabeledDataset(rows, labels, provenance="raw")


@dataclass(frozen=True)
class ScalerParams:
    """Per-feature mean and population standard deviation, fit on training data."""

    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "mean", np.asarray(self.mean, dtype=np.float64))
        object.__setattr__(self, "std", np.asarray(self.std, dtype=np.float64))
        if self.mean.shape != self.std.shape or self.mean.ndim != 1:
            raise ValueError("mean and std must be 1-D arrays of equal length")
        if np.any(self.std < 0):
            raise ValueError("std entries must be >= 0")

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "ScalerParams":
        return cls(np.array(d["mean"]), np.array(d["std"]))


def fit_scaler(train: LabeledDataset) -> ScalerParams:
    """Per-feature mean/std from the training rows only."""
    return ScalerParams(train.X.mean(axis=0), train.X.std(axis=0))


def scale_rows(X: np.ndarray, params: ScalerParams) -> np.ndarray:
    """(x - mean) / std per feature; a zero-std feature maps to 0."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape[-1] != params.mean.shape[0]:
        raise ValueError(
            f"row arity {X.shape[-1]} does not match scaler arity {params.mean.shape[0]}"
        )
    safe_std = np.where(params.std == 0, 1.0, params.std)
    scaled = (X - params.mean) / safe_std
    return np.where(params.std == 0, 0.0, scaled)


def apply_scaler(data: LabeledDataset, params: ScalerParams) -> LabeledDataset:
    """Normalize predictors, leaving labels untouched."""
    return LabeledDataset(scale_rows(data.X, params), data.y.copy(), provenance="scaled", scaler=params)


@dataclass(frozen=True)
class SplitSpec:
    train_frac: float = 0.70
    val_frac: float = 0.15
    test_frac: float = 0.15
    seed: int = 42

    def __post_init__(self) -> None:
        total = self.train_frac + self.val_frac + self.test_frac
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"split fractions must sum to 1, got {total}")


def split(
    data: LabeledDataset, spec: SplitSpec
) -> tuple[LabeledDataset, LabeledDataset, LabeledDataset]:
    """Seeded uniform shuffle into train/val/test of sizes
    floor(train_frac*n) / floor(val_frac*n) / remainder."""
    n = len(data)
    if n < 10:
        raise ValueError("split requires at least 10 rows")
    rng = np.random.default_rng(spec.seed)
    order = rng.permutation(n)
    n_train = int(np.floor(spec.train_frac * n))
    n_val = int(np.floor(spec.val_frac * n))
    idx_train = order[:n_train]
    idx_val = order[n_train : n_train + n_val]
    idx_test = order[n_train + n_val :]

    def take(idx: np.ndarray) -> LabeledDataset:
        return LabeledDataset(data.X[idx], data.y[idx], provenance=data.provenance, scaler=data.scaler)

    return take(idx_train), take(idx_val), take(idx_test)


def undersample(train: LabeledDataset, seed: int) -> LabeledDataset:
    """Randomly downsample the majority class to the minority-class count.

    Sampling is without replacement and seeded; the minority class is kept
    intact. Kept rows stay in their original order, so an already-balanced
    input comes back unchanged.
    """
    idx0 = np.flatnonzero(train.y == 0)
    idx1 = np.flatnonzero(train.y == 1)
    if len(idx0) == 0 or len(idx1) == 0:
        raise ValueError("undersample requires both classes present")
    rng = np.random.default_rng(seed)
    if len(idx0) > len(idx1):
        idx0 = np.sort(rng.choice(idx0, size=len(idx1), replace=False))
    elif len(idx1) > len(idx0):
        idx1 = np.sort(rng.choice(idx1, size=len(idx0), replace=False))
    keep = np.sort(np.concatenate([idx0, idx1]))
    return LabeledDataset(
        train.X[keep], train.y[keep], provenance="balanced", scaler=train.scaler
    )


def to_csv(data: LabeledDataset) -> bytes:
    """Featurized-dataset CSV with the exact canonical header."""
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for row, lab in zip(data.X, data.y):
        buf.write(",".join(_format_number(v) for v in row) + f",{int(lab)}\n")
    return buf.getvalue().encode("ascii")


def _format_number(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def from_csv(data: bytes) -> LabeledDataset:
    """Parse a featurized-dataset CSV (header must match exactly)."""
    text = data.decode("ascii")
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != list(FEATURE_NAMES) + [LABEL_NAME]:
        raise ValueError(f"unexpected CSV header: {header}")
    X: list[list[float]] = []
    y: list[int] = []
    for row in reader:
        if not row:
            continue
        if len(row) != len(FEATURE_NAMES) + 1:
            raise ValueError(f"row has {len(row)} columns, expected {len(FEATURE_NAMES) + 1}")
        X.append([float(v) for v in row[:-1]])
        y.append(int(row[-1]))
    return LabeledDataset(np.array(X, dtype=np.float64).reshape(len(X), len(FEATURE_NAMES)), np.array(y, dtype=np.int64))
