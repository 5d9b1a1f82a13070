"""Report models - learning curves and strategy comparisons."""

from pydantic import BaseModel, Field

REPORT_FORMAT_VERSION = 1


class RoundRecord(BaseModel):
    """Metrics for one round of the loop."""

    round: int = Field(..., ge=0)
    test_accuracy: float = Field(..., ge=0.0, le=1.0)
    train_loss: float = Field(..., ge=0.0)
    oracle_spent: int = Field(..., ge=0)
    pseudo_count: int = Field(..., ge=0)
    pseudo_accuracy: float | None = Field(
        None,
        ge=0.0,
        le=1.0,
        description="Pseudo-label agreement with hidden truth; None when D^H is empty",
    )
    wall_time_ms: int = Field(0, ge=0)
    queried_ids: list[int] = Field(default_factory=list)

    model_config = {"frozen": True, "extra": "forbid"}


class RunSummary(BaseModel):
    """Final state of a run after the closing fit."""

    final_accuracy: float = Field(..., ge=0.0, le=1.0)
    final_nll: float = Field(..., ge=0.0)
    oracle_spent: int = Field(..., ge=0)
    labeled_count: int = Field(..., ge=0)
    pseudo_count: int = Field(..., ge=0)
    rounds: int = Field(..., ge=0)
    termination: str = Field(..., description="budget, pool or rounds_limit")

    model_config = {"frozen": True, "extra": "forbid"}


class RunReport(BaseModel):
    """Per-round learning curve of one experiment."""

    format_version: int = REPORT_FORMAT_VERSION
    dataset_digest: str = ""
    variant: str = ""
    seed: int = 0
    strategy: str = Field("", description="Strategy identifier, e.g. hybrid-entropy-b1.0+budget")
    rounds: list[RoundRecord] = Field(default_factory=list)
    summary: RunSummary | None = None

    model_config = {"frozen": True, "extra": "forbid"}


class RoundStat(BaseModel):
    """Across-seed statistics for one round index."""

    round: int
    mean_accuracy: float
    sd_accuracy: float
    runs: int

    model_config = {"frozen": True, "extra": "forbid"}


class VariantResult(BaseModel):
    """Aggregated curve and per-seed finals for one variant."""

    name: str
    curve: list[RoundStat] = Field(default_factory=list)
    final_accuracies: list[float] = Field(default_factory=list)
    mean_final_accuracy: float = 0.0
    sd_final_accuracy: float = 0.0

    model_config = {"frozen": True, "extra": "forbid"}


class PairedDifference(BaseModel):
    """Final accuracy of ``variant`` minus ``baseline`` per seed."""

    variant: str
    baseline: str
    seeds: list[int]
    differences: list[float]
    mean_difference: float

    model_config = {"frozen": True, "extra": "forbid"}


class ComparisonReport(BaseModel):
    """Result of running every variant on every seed."""

    format_version: int = REPORT_FORMAT_VERSION
    dataset_digest: str
    seeds: list[int]
    variants: list[VariantResult]
    paired: list[PairedDifference] = Field(default_factory=list)

    model_config = {"frozen": True, "extra": "forbid"}
