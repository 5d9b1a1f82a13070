"""Softmax head over frozen features: prediction, loss, gradients, SGD, evaluation.

A batch is a triple of arrays (features (n, d), labels (n,), weights (n,)).
Seed and oracle examples carry weight 1.0, pseudo-labeled examples carry
``TrainConfig.pseudo_weight``. Loss and gradients are weight-normalized means.
"""

import logging
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from poolal.core.errors import (
    DegenerateBatchError,
    DegenerateTrainingError,
    InputError,
    ShapeError,
)
from poolal.core.models.head import Metrics, SoftmaxHead, TrainConfig

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]
IntArray = NDArray[np.int64]


class Batch(NamedTuple):
    """Weighted training examples."""

    features: FloatArray
    labels: IntArray
    weights: FloatArray

    @classmethod
    def of(
        cls,
        features: ArrayLike,
        labels: ArrayLike,
        weights: ArrayLike | None = None,
    ) -> "Batch":
        x = np.atleast_2d(np.asarray(features, dtype=np.float64))
        y = np.asarray(labels, dtype=np.int64).reshape(-1)
        w = np.ones(len(y)) if weights is None else np.asarray(weights, dtype=np.float64)
        return cls(x, y, w.reshape(-1))

    @property
    def size(self) -> int:
        return int(self.labels.shape[0])

    def subset(self, idx: IntArray) -> "Batch":
        return Batch(self.features[idx], self.labels[idx], self.weights[idx])


def _check_features(head: SoftmaxHead, x: FloatArray) -> None:
    if x.ndim != 2 or x.shape[1] != head.feature_dim:
        raise ShapeError(
            f"expected features of dimension {head.feature_dim}, got shape {x.shape}"
        )
    if not np.all(np.isfinite(x)):
        raise InputError("features contain non-finite values")


def _softmax_rows(logits: FloatArray) -> FloatArray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _weighted_residual(
    weights: FloatArray, bias: FloatArray, batch: Batch, total: float
) -> FloatArray:
    """Rows of (p - onehot(y)) scaled by w_i / sum(w)."""
    residual = _softmax_rows(batch.features @ weights.T + bias)
    residual[np.arange(batch.size), batch.labels] -= 1.0
    residual *= (batch.weights / total)[:, None]
    return residual


def _log_softmax_rows(logits: FloatArray) -> FloatArray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def predict_proba_batch(head: SoftmaxHead, features: ArrayLike) -> FloatArray:
    """Class probabilities for every row of ``features``, shape (n, K)."""
    x = np.atleast_2d(np.asarray(features, dtype=np.float64))
    _check_features(head, x)
    return _softmax_rows(x @ head.weights.T + head.bias)


def predict_proba(head: SoftmaxHead, features: ArrayLike) -> FloatArray:
    """p(y = l | x; theta) for a single d-vector.

    Raises:
        ShapeError: If ``features`` is not a d-vector.
        InputError: If ``features`` holds a non-finite entry.
    """
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 1:
        raise ShapeError(f"expected a single feature vector, got shape {x.shape}")
    return predict_proba_batch(head, x[None, :])[0]


def _check_batch(head: SoftmaxHead, batch: Batch) -> float:
    if batch.size == 0:
        raise InputError("batch is empty")
    _check_features(head, batch.features)
    if batch.labels.min() < 0 or batch.labels.max() >= head.class_count:
        raise InputError(f"labels must lie in 0..{head.class_count - 1}")
    if np.any(batch.weights < 0):
        raise InputError("example weights must be non-negative")
    total = float(batch.weights.sum())
    if total <= 0.0:
        raise DegenerateBatchError("every example in the batch has zero weight")
    return total


def nll_loss(head: SoftmaxHead, batch: Batch) -> float:
    """Weighted mean of -log p(label | features).

    Raises:
        DegenerateBatchError: If all weights are zero.
    """
    total = _check_batch(head, batch)
    log_p = _log_softmax_rows(batch.features @ head.weights.T + head.bias)
    picked = log_p[np.arange(batch.size), batch.labels]
    return max(0.0, float(-(batch.weights @ picked) / total))


def gradients(head: SoftmaxHead, batch: Batch) -> tuple[FloatArray, FloatArray]:
    """Exact gradient of ``nll_loss`` w.r.t. (weights, bias).

    Per example the weight gradient is outer(p - onehot(y), x); the batch
    gradient is their weight-averaged sum.
    """
    total = _check_batch(head, batch)
    residual = _weighted_residual(head.weights, head.bias, batch, total)
    return residual.T @ batch.features, residual.sum(axis=0)


def _check_trainset(trainset: Batch) -> None:
    if trainset.size == 0:
        raise InputError("training set is empty")
    distinct = np.unique(trainset.labels)
    if len(distinct) < 2:
        raise DegenerateTrainingError(trainset.labels.tolist())


def sgd_fit(head: SoftmaxHead, trainset: Batch, config: TrainConfig) -> SoftmaxHead:
    """Plain mini-batch SGD on the weighted cross-entropy.

    Each epoch shuffles with seed ``shuffle_seed ^ epoch`` and walks the
    permutation in chunks of ``batch_size`` (the last chunk may be short).
    Chunks whose weights are all zero are skipped. Training starts from
    ``head``; callers pass a zero head to train from scratch.

    Raises:
        DegenerateTrainingError: If the set holds fewer than two distinct labels.
    """
    _check_trainset(trainset)
    _check_batch(head, trainset)

    weights = np.array(head.weights, dtype=np.float64)
    bias = np.array(head.bias, dtype=np.float64)
    if config.learning_rate == 0.0:
        return SoftmaxHead(weights=weights, bias=bias)

    n = trainset.size
    for epoch in range(config.epochs):
        order = np.random.default_rng(config.shuffle_seed ^ epoch).permutation(n)
        for start in range(0, n, config.batch_size):
            chunk = trainset.subset(order[start : start + config.batch_size])
            total = float(chunk.weights.sum())
            if total <= 0.0:
                continue
            residual = _weighted_residual(weights, bias, chunk, total)
            weights -= config.learning_rate * (residual.T @ chunk.features)
            bias -= config.learning_rate * residual.sum(axis=0)

    if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(bias))):
        raise InputError("SGD diverged to non-finite parameters; lower the learning rate")
    return SoftmaxHead(weights=weights, bias=bias)


def evaluate(head: SoftmaxHead, features: ArrayLike, labels: ArrayLike) -> Metrics:
    """Accuracy (argmax, ties to the lowest class) and mean NLL on a labelled split.

    Raises:
        InputError: If the split is empty.
    """
    y = np.asarray(labels, dtype=np.int64).reshape(-1)
    if len(y) == 0:
        raise InputError("test set is empty")
    batch = Batch.of(features, y)
    probs = predict_proba_batch(head, batch.features)
    accuracy = float(np.mean(np.argmax(probs, axis=1) == y))
    return Metrics(accuracy=accuracy, mean_nll=nll_loss(head, batch))
