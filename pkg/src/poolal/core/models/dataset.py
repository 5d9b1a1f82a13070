"""Dataset models - the fixed feature embeddings the learner draws from."""

from typing import Any

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field, PrivateAttr, model_validator

from poolal.core.models.ids import InstanceId, Split


class Instance(BaseModel):
    """A single embedded instance.

    The true label is carried here for the oracle and for evaluation; the
    learner only ever sees labels through LabelRecords.
    """

    id: InstanceId = Field(..., ge=0, description="Dense id, unique within the dataset")
    split: Split = Field(..., description="train or test")
    features: list[float] = Field(..., description="Embedding coordinates")
    true_label: int = Field(..., ge=0, description="Ground-truth class index")

    model_config = {
        "frozen": True,
        "extra": "forbid",
    }


class SyntheticSpec(BaseModel):
    """Parameters of the Gaussian-cluster stand-in for precomputed embeddings."""

    class_count: int = Field(10, ge=2, description="Number of classes K")
    feature_dim: int = Field(32, ge=1, description="Embedding dimension d")
    per_class: int = Field(600, ge=2, description="Instances generated per class")
    separation: float = Field(6.0, gt=0, description="Minimum distance s between class means")
    sigma: float = Field(1.0, gt=0, description="Within-class standard deviation")
    rng_seed: int = Field(0, ge=0, description="Generator seed")
    name: str = Field("synthetic", description="Dataset name")

    model_config = {
        "frozen": True,
        "extra": "forbid",
    }


class Dataset(BaseModel):
    """An immutable train/test split of embeddings with a content digest.

    Build instances through ``poolal.data.embeddings.build_dataset`` so the
    digest always matches the canonical serialization.
    """

    name: str
    feature_dim: int = Field(..., ge=1)
    class_count: int = Field(..., ge=1)
    train_ids: np.ndarray
    train_features: np.ndarray
    train_labels: np.ndarray
    test_ids: np.ndarray
    test_features: np.ndarray
    test_labels: np.ndarray
    digest: str

    model_config = {
        "frozen": True,
        "extra": "forbid",
        "arbitrary_types_allowed": True,
    }

    _train_rows: NDArray[np.int64] = PrivateAttr()

    @model_validator(mode="after")
    def _check_shapes(self) -> "Dataset":
        d = self.feature_dim
        for split, ids, feats, labels in (
            ("train", self.train_ids, self.train_features, self.train_labels),
            ("test", self.test_ids, self.test_features, self.test_labels),
        ):
            if feats.ndim != 2 or feats.shape[1] != d:
                raise ValueError(f"{split} features must have shape (n, {d}), got {feats.shape}")
            if not (len(ids) == len(labels) == feats.shape[0]):
                raise ValueError(f"{split} ids, labels and features disagree in length")
            if not np.all(np.isfinite(feats)):
                raise ValueError(f"{split} features contain non-finite values")
            if len(labels) and (labels.min() < 0 or labels.max() >= self.class_count):
                raise ValueError(f"{split} labels must lie in 0..{self.class_count - 1}")

        all_ids = np.concatenate([self.train_ids, self.test_ids])
        if not np.array_equal(np.sort(all_ids), np.arange(len(all_ids))):
            raise ValueError("instance ids must be dense 0..N-1 and unique across splits")
        return self

    def model_post_init(self, __context: Any) -> None:
        rows = np.full(len(self.train_ids) + len(self.test_ids), -1, dtype=np.int64)
        rows[self.train_ids] = np.arange(len(self.train_ids))
        self._train_rows = rows

    @property
    def train_size(self) -> int:
        return len(self.train_ids)

    @property
    def test_size(self) -> int:
        return len(self.test_ids)

    def train_rows(self, ids: Any) -> NDArray[np.int64]:
        """Map instance ids to row indices of the training arrays."""
        idx = np.asarray(ids, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= len(self._train_rows)):
            raise KeyError("instance id outside the dataset")
        rows = self._train_rows[idx]
        if np.any(rows < 0):
            raise KeyError("instance id belongs to the test split")
        return rows

    def is_train_id(self, instance_id: int) -> bool:
        return 0 <= instance_id < len(self._train_rows) and bool(self._train_rows[instance_id] >= 0)

    def features_of(self, ids: Any) -> NDArray[np.float64]:
        return self.train_features[self.train_rows(ids)]

    def labels_of(self, ids: Any) -> NDArray[np.int64]:
        return self.train_labels[self.train_rows(ids)]

    def instance(self, instance_id: int) -> Instance:
        """Materialize one instance from either split."""
        if self.is_train_id(instance_id):
            row = int(self._train_rows[instance_id])
            return Instance(
                id=InstanceId(instance_id),
                split=Split.TRAIN,
                features=self.train_features[row].tolist(),
                true_label=int(self.train_labels[row]),
            )
        matches = np.flatnonzero(self.test_ids == instance_id)
        if not len(matches):
            raise KeyError(f"instance {instance_id} not in dataset")
        row = int(matches[0])
        return Instance(
            id=InstanceId(instance_id),
            split=Split.TEST,
            features=self.test_features[row].tolist(),
            true_label=int(self.test_labels[row]),
        )
