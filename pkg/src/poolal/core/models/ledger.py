"""Budget models - oracle cost accounting and pseudo-label assignments."""

from pydantic import BaseModel, Field, model_validator

from poolal.core.models.ids import InstanceId


class BudgetLedger(BaseModel):
    """Oracle budget m and what has been spent against it.

    Oracle queries cost 1 each, pseudo-labels cost nothing. Ledgers are
    immutable; ``poolal.engine.budget_annotator.charge_queries`` returns an
    updated copy or raises without touching the original.
    """

    oracle_budget: int = Field(..., ge=0, description="Total oracle queries allowed (m)")
    oracle_spent: int = Field(0, ge=0)
    per_round_query_cap: int = Field(..., ge=1, description="Oracle queries per round (k)")
    pseudo_cap_per_round: int = Field(..., ge=0)
    confidence_threshold: float = Field(0.95, gt=0.0, le=1.0, description="tau")
    pseudo_assigned_total: int = Field(0, ge=0)

    model_config = {
        "frozen": True,
        "extra": "forbid",
    }

    @model_validator(mode="after")
    def _check_spent(self) -> "BudgetLedger":
        if self.oracle_spent > self.oracle_budget:
            raise ValueError(
                f"oracle_spent {self.oracle_spent} exceeds budget {self.oracle_budget}"
            )
        return self


class PseudoAssignment(BaseModel):
    """A machine-assigned label for a confident unlabeled instance."""

    instance_id: InstanceId = Field(..., ge=0)
    label: int = Field(..., ge=0, description="Argmax class")
    confidence: float = Field(..., ge=0.0, le=1.0, description="Max predicted probability")

    model_config = {
        "frozen": True,
        "extra": "forbid",
    }
