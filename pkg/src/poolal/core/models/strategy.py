"""Strategy models - scoring configuration and scored candidates."""

from pydantic import BaseModel, Field

from poolal.core.models.ids import InstanceId, SelectorKind, UncertaintyKind


class StrategyConfig(BaseModel):
    """How unlabeled instances are scored and picked each round."""

    selector: SelectorKind = Field(
        SelectorKind.HYBRID,
        description="hybrid scoring or the random passive-learning control",
    )
    uncertainty_kind: UncertaintyKind = Field(
        UncertaintyKind.ENTROPY,
        description="Uncertainty measure fed into the hybrid score",
    )
    beta: float = Field(1.0, ge=0.0, description="Density exponent; 0 gives uncertainty-only")
    batch_k: int = Field(20, ge=1, description="Oracle queries per round")
    density_sample: int = Field(
        2000,
        ge=1,
        description="Cap on pairwise comparisons per candidate density",
    )

    model_config = {
        "frozen": True,
        "extra": "forbid",
    }


class ScoredInstance(BaseModel):
    """One candidate's scores: hybrid = uncertainty * max(density, 0) ** beta."""

    id: InstanceId = Field(..., ge=0)
    uncertainty: float = Field(..., ge=0.0, le=1.0)
    density: float = Field(..., ge=-1.0, le=1.0)
    hybrid: float

    model_config = {
        "frozen": True,
        "extra": "forbid",
        "allow_inf_nan": False,
    }
