"""Run configuration models."""

from typing import Any

from pydantic import BaseModel, Field, model_validator

from poolal.core.models.head import TrainConfig
from poolal.core.models.strategy import StrategyConfig
from poolal.core.util.config import deep_merge


class OracleConfig(BaseModel):
    """Simulated annotator settings."""

    noise_rate: float = Field(0.0, ge=0.0, le=1.0, description="Symmetric label-flip rate rho")
    rng_seed: int = Field(0, ge=0)

    model_config = {
        "frozen": True,
        "extra": "forbid",
    }


class RunConfig(BaseModel):
    """Everything that determines the numbers of one experiment.

    Two runs with equal RunConfig on the same dataset produce byte-identical
    reports (unless ``record_timing`` is on).
    """

    strategy: StrategyConfig = Field(default_factory=StrategyConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    oracle: OracleConfig = Field(default_factory=OracleConfig)

    budget: int = Field(1000, ge=0, description="Oracle query budget m")
    seed_count: int = Field(100, ge=1, description="Initial stratified seed labels")
    confidence_threshold: float = Field(0.95, gt=0.0, le=1.0, description="tau")
    pseudo_cap: int | None = Field(
        None,
        ge=0,
        description="Pseudo-labels per round; defaults to 5x batch_k",
    )
    pseudo_enabled: bool = Field(True, description="Run the budget annotator each round")
    rounds_limit: int | None = Field(None, ge=1, description="Hard cap on rounds")
    seed: int = Field(0, ge=0, description="Master seed; every other seed derives from it")
    record_timing: bool = Field(
        False,
        description="Write measured wall time into reports (breaks byte-identity)",
    )

    model_config = {
        "frozen": True,
        "extra": "forbid",
    }

    @model_validator(mode="after")
    def _check_budget(self) -> "RunConfig":
        if self.budget and self.budget < self.strategy.batch_k:
            raise ValueError(
                f"budget {self.budget} is smaller than batch_k {self.strategy.batch_k}"
            )
        return self

    def with_overrides(self, overrides: dict[str, Any]) -> "RunConfig":
        """Deep-merge ``overrides`` over this config and re-validate."""
        return RunConfig.model_validate(deep_merge(self.model_dump(mode="json"), overrides))

    @property
    def effective_pseudo_cap(self) -> int:
        if self.pseudo_cap is not None:
            return self.pseudo_cap
        return 5 * self.strategy.batch_k
