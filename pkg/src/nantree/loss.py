"""Training losses and closed-form leaf values.

Two losses are supported: sum of squared errors for real responses and
cross-entropy (negative log-likelihood) for class responses. Both are
implemented in their weighted form; unit weights reproduce the plain
definitions. Leaf values are a float (weighted mean) for SSE and a
probability vector (weighted class frequencies) for cross-entropy.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import CLASS, Dataset, ResponseColumn

SSE = "sse"
CROSS_ENTROPY = "xe"

#: Probabilities are clamped to this floor before taking logs, so the
#: loss stays finite when a leaf assigns probability zero to a test label.
LOG_CLAMP = 1e-12


@dataclass(frozen=True)
class LossKind:
    name: str
    n_classes: int = 0

    def __post_init__(self) -> None:
        if self.name not in (SSE, CROSS_ENTROPY):
            raise ValueError(f"unknown loss {self.name!r}")
        if self.name == CROSS_ENTROPY and self.n_classes < 2:
            raise ValueError("cross-entropy needs at least two classes")

    @staticmethod
    def sse() -> "LossKind":
        return LossKind(SSE)

    @staticmethod
    def cross_entropy(n_classes: int) -> "LossKind":
        return LossKind(CROSS_ENTROPY, n_classes)

    @property
    def is_classification(self) -> bool:
        return self.name == CROSS_ENTROPY


def loss_for_response(response: ResponseColumn) -> LossKind:
    if response.kind == CLASS:
        return LossKind.cross_entropy(response.n_classes)
    return LossKind.sse()


def loss_for(ds: Dataset) -> LossKind:
    return loss_for_response(ds.response)


def _weights(y: np.ndarray, weights: np.ndarray | None) -> np.ndarray:
    if weights is None:
        return np.ones(len(y), dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != np.shape(y):
        raise ValueError("weights and responses have different lengths")
    return w


def _check_labels(y: np.ndarray, kind: LossKind) -> np.ndarray:
    y = np.asarray(y)
    if y.size and (y.min() < 0 or y.max() >= kind.n_classes):
        raise ValueError(f"class label outside 0..{kind.n_classes - 1}")
    return y.astype(np.int64, copy=False)


def fit_leaf(y: np.ndarray, kind: LossKind, weights: np.ndarray | None = None):
    """Loss-minimizing constant for a sample: weighted mean, or weighted
    class frequencies for cross-entropy. Errors on an empty sample."""
    y = np.asarray(y)
    if y.size == 0:
        raise ValueError("cannot fit a leaf on an empty sample")
    w = _weights(y, weights)
    total = w.sum()
    if total <= 0:
        raise ValueError("total weight must be positive")
    if kind.is_classification:
        y = _check_labels(y, kind)
        counts = np.bincount(y, weights=w, minlength=kind.n_classes)
        return counts / total
    return float((w * y).sum() / total)


def eval_loss(y: np.ndarray, value, kind: LossKind, weights: np.ndarray | None = None) -> float:
    """Weighted loss of a sample under a fixed leaf value; 0 when empty."""
    y = np.asarray(y)
    if y.size == 0:
        return 0.0
    w = _weights(y, weights)
    if kind.is_classification:
        y = _check_labels(y, kind)
        probs = np.asarray(value, dtype=np.float64)
        if probs.shape != (kind.n_classes,):
            raise ValueError(f"leaf value must have {kind.n_classes} probabilities")
        p = np.maximum(probs[y], LOG_CLAMP)
        return float(-(w * np.log(p)).sum())
    delta = float(value)
    resid = y - delta
    return float((w * resid * resid).sum())
