"""Core ID types and enumerations."""

from enum import Enum
from typing import NewType

InstanceId = NewType("InstanceId", int)


class LabelSource(str, Enum):
    """Where a label came from."""

    SEED = "seed"
    ORACLE = "oracle"
    PSEUDO = "pseudo"


class Split(str, Enum):
    """Dataset split tags used by the embedding CSV format."""

    TRAIN = "train"
    TEST = "test"


class UncertaintyKind(str, Enum):
    """Uncertainty measures available to the hybrid scorer."""

    ENTROPY = "entropy"
    MARGIN = "margin"
    LEAST_CONFIDENCE = "lc"

    @classmethod
    def _missing_(cls, value: object) -> "UncertaintyKind | None":
        if value == "least_confidence":
            return cls.LEAST_CONFIDENCE
        return None


class SelectorKind(str, Enum):
    """How a round picks its oracle batch."""

    HYBRID = "hybrid"
    RANDOM = "random"
