"""Shared fixtures."""

import pytest

from poolal.core.models.dataset import Dataset, SyntheticSpec
from poolal.core.models.head import TrainConfig
from poolal.core.models.run import RunConfig
from poolal.core.models.strategy import StrategyConfig
from poolal.data.synthetic import generate_synthetic


@pytest.fixture(scope="session")
def small_dataset() -> Dataset:
    """3 classes, d=4: 48 train / 12 test instances."""
    return generate_synthetic(
        SyntheticSpec(class_count=3, feature_dim=4, per_class=20, separation=6.0, rng_seed=1)
    )


@pytest.fixture(scope="session")
def tiny_dataset() -> Dataset:
    """3 classes, d=4: exactly 30 train / 9 test instances."""
    return generate_synthetic(
        SyntheticSpec(class_count=3, feature_dim=4, per_class=13, separation=6.0, rng_seed=2)
    )


@pytest.fixture
def fast_config() -> RunConfig:
    """Cheap RunConfig for the small fixtures."""
    return RunConfig(
        strategy=StrategyConfig(batch_k=4, density_sample=50),
        train=TrainConfig(epochs=3, batch_size=8),
        budget=12,
        seed_count=6,
        confidence_threshold=0.9,
    )
