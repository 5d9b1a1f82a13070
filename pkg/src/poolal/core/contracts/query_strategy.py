"""Query strategy contract."""

from abc import ABC, abstractmethod

from pydantic import BaseModel, Field

from poolal.core.models.dataset import Dataset
from poolal.core.models.head import SoftmaxHead
from poolal.core.models.ids import InstanceId
from poolal.core.models.pool import PoolState
from poolal.core.models.strategy import ScoredInstance


class Selection(BaseModel):
    """Ids picked for the oracle, in priority order, plus the scores behind them."""

    ids: list[InstanceId] = Field(default_factory=list)
    scored: list[ScoredInstance] = Field(
        default_factory=list,
        description="Every scored candidate; empty for selectors that do not score",
    )

    model_config = {"frozen": True, "extra": "forbid"}


class QueryStrategy(ABC):
    """Abstract base class for oracle-batch selectors.

    Implementations must be deterministic in (head, state, k, rng_seed) and
    must only pick ids from ``state.unlabeled_ids``.
    """

    name: str = "base"

    @abstractmethod
    def select(
        self,
        head: SoftmaxHead,
        dataset: Dataset,
        state: PoolState,
        k: int,
        rng_seed: int,
    ) -> Selection:
        """Pick up to ``k`` unlabeled ids to send to the oracle.

        Args:
            head: Model trained this round.
            dataset: Source of candidate features.
            state: Current pool partition.
            k: Batch size after budget clamping.
            rng_seed: Round-specific seed.

        Returns:
            Selection with at most ``k`` ids.
        """
        ...
