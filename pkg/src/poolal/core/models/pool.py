"""Pool models - the D^L / D^U / D^H partition of the training split."""

from pydantic import BaseModel, Field, model_validator

from poolal.core.models.ids import InstanceId, LabelSource


class LabelRecord(BaseModel):
    """A label assignment with its provenance."""

    instance_id: InstanceId = Field(..., ge=0)
    label: int = Field(..., ge=0, description="Class index")
    source: LabelSource
    round: int = Field(..., ge=0, description="Round index at assignment")
    confidence: float = Field(1.0, ge=0.0, le=1.0)

    model_config = {
        "frozen": True,
        "extra": "forbid",
    }

    @model_validator(mode="after")
    def _check_confidence(self) -> "LabelRecord":
        if self.source != LabelSource.PSEUDO and self.confidence != 1.0:
            raise ValueError("seed and oracle labels carry confidence 1.0")
        return self


class PoolState(BaseModel):
    """Snapshot of the pool partition at one point of a run.

    PoolState values are never mutated; every transition in
    ``poolal.engine.pools`` returns a new state. ``labeled`` keeps insertion
    order, ``unlabeled_ids`` is kept sorted. Pseudo-labeled ids stay inside
    ``unlabeled_ids`` so the oracle can still be asked about them.
    """

    labeled: list[LabelRecord] = Field(default_factory=list)
    pseudo: list[LabelRecord] = Field(default_factory=list)
    unlabeled_ids: list[InstanceId] = Field(default_factory=list)
    round: int = Field(0, ge=0)

    model_config = {
        "frozen": True,
        "extra": "forbid",
    }

    @model_validator(mode="after")
    def _check_partition(self) -> "PoolState":
        labeled = {r.instance_id for r in self.labeled}
        pseudo = {r.instance_id for r in self.pseudo}
        unlabeled = set(self.unlabeled_ids)
        if len(labeled) != len(self.labeled):
            raise ValueError("duplicate ids in labeled set")
        if len(pseudo) != len(self.pseudo) or len(unlabeled) != len(self.unlabeled_ids):
            raise ValueError("duplicate ids in pseudo or unlabeled set")
        if any(r.source == LabelSource.PSEUDO for r in self.labeled):
            raise ValueError("labeled set holds only seed and oracle records")
        if any(r.source != LabelSource.PSEUDO for r in self.pseudo):
            raise ValueError("pseudo set holds only pseudo records")
        if labeled & unlabeled or labeled & pseudo:
            raise ValueError("labeled ids overlap pseudo or unlabeled ids")
        # D^H is a confident view over D^U, not a third bucket
        if not pseudo <= unlabeled:
            raise ValueError("pseudo ids must remain in the unlabeled pool")
        return self

    @property
    def labeled_ids(self) -> list[InstanceId]:
        return [r.instance_id for r in self.labeled]

    @property
    def pseudo_ids(self) -> list[InstanceId]:
        return [r.instance_id for r in self.pseudo]

    @property
    def oracle_count(self) -> int:
        return sum(1 for r in self.labeled if r.source == LabelSource.ORACLE)
