"""Run-state snapshot for pause/resume."""

from typing import Any

from pydantic import BaseModel, Field

from poolal.core.models.ledger import BudgetLedger
from poolal.core.models.pool import PoolState
from poolal.core.models.report import RoundRecord
from poolal.core.models.run import RunConfig

SNAPSHOT_FORMAT_VERSION = 1


class RunSnapshot(BaseModel):
    """Everything needed to continue a run from the start of ``next_round``."""

    format_version: int = SNAPSHOT_FORMAT_VERSION
    dataset_digest: str
    config: RunConfig
    next_round: int = Field(..., ge=0)
    pool: PoolState
    ledger: BudgetLedger
    head: dict[str, Any] = Field(..., description="SoftmaxHead checkpoint")
    oracle_queries: int = Field(0, ge=0, description="Queries answered so far")
    rounds: list[RoundRecord] = Field(default_factory=list)

    model_config = {"frozen": True, "extra": "forbid"}
