"""Gaussian-cluster stand-in for embeddings exported from a frozen network."""

import logging

import numpy as np

from poolal.core.errors import GenerationError
from poolal.core.models.dataset import Dataset, SyntheticSpec
from poolal.core.util.seeding import rng_for
from poolal.data.embeddings import build_dataset

logger = logging.getLogger(__name__)

MAX_MEAN_ATTEMPTS = 1000
TRAIN_FRACTION = 0.8


def _class_means(spec: SyntheticSpec, rng: np.random.Generator) -> np.ndarray:
    scale = spec.separation / np.sqrt(spec.feature_dim)
    means: list[np.ndarray] = []
    for cls in range(spec.class_count):
        for _ in range(MAX_MEAN_ATTEMPTS):
            candidate = rng.normal(0.0, scale, size=spec.feature_dim)
            if all(np.linalg.norm(candidate - m) >= spec.separation for m in means):
                means.append(candidate)
                break
        else:
            raise GenerationError(
                f"could not place mean {cls} at distance >= {spec.separation} from the "
                f"others in {MAX_MEAN_ATTEMPTS} attempts; lower separation or raise feature_dim"
            )
    return np.stack(means)


def generate_synthetic(spec: SyntheticSpec) -> Dataset:
    """K isotropic Gaussian clusters split 80/20 per class.

    Means are drawn from N(0, s^2/d I) and rejected until pairwise distances
    reach s; samples are mean + sigma * N(0, I). Ids are assigned after a
    seeded global shuffle so neither split is ordered by class.

    Raises:
        GenerationError: If the separation cannot be met.
    """
    means = _class_means(spec, rng_for(spec.rng_seed, "means"))
    rng = rng_for(spec.rng_seed, "samples")

    n_train = int(round(spec.per_class * TRAIN_FRACTION))
    n_train = min(max(n_train, 1), spec.per_class - 1)
    features: list[np.ndarray] = []
    labels: list[np.ndarray] = []
    is_train: list[np.ndarray] = []
    for cls in range(spec.class_count):
        points = means[cls] + spec.sigma * rng.standard_normal((spec.per_class, spec.feature_dim))
        features.append(points)
        labels.append(np.full(spec.per_class, cls, dtype=np.int64))
        mask = np.zeros(spec.per_class, dtype=bool)
        mask[rng.permutation(spec.per_class)[:n_train]] = True
        is_train.append(mask)

    x = np.concatenate(features)
    y = np.concatenate(labels)
    train_mask = np.concatenate(is_train)
    ids = np.empty(len(y), dtype=np.int64)
    ids[rng_for(spec.rng_seed, "ids").permutation(len(y))] = np.arange(len(y))

    def _split(mask: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        order = np.argsort(ids[mask], kind="stable")
        return ids[mask][order], x[mask][order], y[mask][order]

    dataset = build_dataset(spec.name, spec.class_count, _split(train_mask), _split(~train_mask))
    logger.info(
        "Generated %s: K=%d d=%d, %d train / %d test",
        spec.name,
        spec.class_count,
        spec.feature_dim,
        dataset.train_size,
        dataset.test_size,
    )
    return dataset
