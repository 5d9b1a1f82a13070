"""Classifier models - the trainable softmax head and its training knobs."""

from typing import Any

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

HEAD_FORMAT_VERSION = 1


class SoftmaxHead(BaseModel):
    """The replaced output layer: logits = weights @ x + bias.

    ``weights`` has shape (K, d), ``bias`` has shape (K,). Both are float64
    and finite. Heads are immutable; training returns a new head.
    """

    weights: np.ndarray
    bias: np.ndarray

    model_config = {
        "frozen": True,
        "extra": "forbid",
        "arbitrary_types_allowed": True,
    }

    @field_validator("weights", "bias", mode="before")
    @classmethod
    def _as_readonly_array(cls, value: Any) -> np.ndarray:
        arr = np.array(value, dtype=np.float64, copy=True)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check_params(self) -> "SoftmaxHead":
        if self.weights.ndim != 2:
            raise ValueError(f"weights must be a K x d matrix, got shape {self.weights.shape}")
        if self.bias.shape != (self.weights.shape[0],):
            raise ValueError(f"bias must have shape ({self.weights.shape[0]},)")
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.bias))):
            raise ValueError("head parameters must be finite")
        return self

    @classmethod
    def zeros(cls, class_count: int, feature_dim: int) -> "SoftmaxHead":
        """All-zero head; the objective is convex so no symmetry breaking is needed."""
        return cls(
            weights=np.zeros((class_count, feature_dim), dtype=np.float64),
            bias=np.zeros(class_count, dtype=np.float64),
        )

    @property
    def class_count(self) -> int:
        return int(self.weights.shape[0])

    @property
    def feature_dim(self) -> int:
        return int(self.weights.shape[1])

    def to_checkpoint(self) -> dict[str, Any]:
        """Serialize as a JSON-ready dict with row-major weights."""
        return {
            "format_version": HEAD_FORMAT_VERSION,
            "class_count": self.class_count,
            "feature_dim": self.feature_dim,
            "weights": self.weights.reshape(-1).tolist(),
            "bias": self.bias.tolist(),
        }

    @classmethod
    def from_checkpoint(cls, payload: dict[str, Any]) -> "SoftmaxHead":
        version = payload.get("format_version")
        if version != HEAD_FORMAT_VERSION:
            raise ValueError(f"unsupported head checkpoint version: {version}")
        k = int(payload["class_count"])
        d = int(payload["feature_dim"])
        weights = np.asarray(payload["weights"], dtype=np.float64)
        if weights.size != k * d:
            raise ValueError(f"expected {k * d} weights, got {weights.size}")
        return cls(
            weights=weights.reshape(k, d),
            bias=np.asarray(payload["bias"], dtype=np.float64),
        )

    def equals(self, other: "SoftmaxHead") -> bool:
        """Bitwise parameter equality."""
        return bool(
            np.array_equal(self.weights, other.weights) and np.array_equal(self.bias, other.bias)
        )


class TrainConfig(BaseModel):
    """Mini-batch SGD settings for fitting the head."""

    epochs: int = Field(15, ge=1, description="Passes over the training set")
    batch_size: int = Field(32, ge=1, description="Examples per SGD step")
    learning_rate: float = Field(0.05, ge=0.0, description="Plain SGD step size")
    shuffle_seed: int = Field(0, ge=0, description="Base seed for per-epoch shuffles")
    pseudo_weight: float = Field(
        1.0,
        ge=0.0,
        le=1.0,
        description="Loss weight lambda for pseudo-labeled examples",
    )
    warm_start: bool = Field(
        True,
        description="Continue from the previous round's head instead of re-initializing",
    )

    model_config = {
        "frozen": True,
        "extra": "forbid",
    }


class Metrics(BaseModel):
    """Evaluation result on a labelled split."""

    accuracy: float = Field(..., ge=0.0, le=1.0)
    mean_nll: float = Field(..., ge=0.0)

    model_config = {"frozen": True, "extra": "forbid"}
