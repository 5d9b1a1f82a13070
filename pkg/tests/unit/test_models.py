"""Unit tests for core models."""

import numpy as np
import pytest
from pydantic import ValidationError

from poolal.core.models.head import SoftmaxHead, TrainConfig
from poolal.core.models.ids import InstanceId, LabelSource, UncertaintyKind
from poolal.core.models.ledger import BudgetLedger
from poolal.core.models.pool import LabelRecord, PoolState
from poolal.core.models.run import RunConfig
from poolal.core.models.strategy import ScoredInstance, StrategyConfig


def _record(i: int, source: LabelSource = LabelSource.SEED, **kw) -> LabelRecord:
    return LabelRecord(instance_id=InstanceId(i), label=0, source=source, round=0, **kw)


class TestLabelRecord:
    """Tests for LabelRecord."""

    def test_seed_record_defaults(self):
        """Seed and oracle records carry confidence 1.0."""
        record = _record(3)
        assert record.confidence == 1.0
        assert record.source == LabelSource.SEED

    def test_oracle_record_rejects_low_confidence(self):
        """Only pseudo records may carry a confidence below 1."""
        with pytest.raises(ValidationError):
            _record(3, LabelSource.ORACLE, confidence=0.5)

    def test_pseudo_record_with_confidence(self):
        """Pseudo records keep their confidence."""
        record = _record(3, LabelSource.PSEUDO, confidence=0.97)
        assert record.confidence == 0.97

    def test_negative_label_rejected(self):
        """Labels are class indices."""
        with pytest.raises(ValidationError):
            LabelRecord(instance_id=InstanceId(0), label=-1, source=LabelSource.SEED, round=0)


class TestPoolState:
    """Tests for PoolState partition checks."""

    def test_valid_partition(self):
        """Labeled, pseudo and unlabeled ids coexist when disjoint from D^L."""
        state = PoolState(
            labeled=[_record(0), _record(1)],
            pseudo=[_record(2, LabelSource.PSEUDO, confidence=0.99)],
            unlabeled_ids=[InstanceId(2), InstanceId(3)],
        )
        assert state.labeled_ids == [0, 1]
        assert state.pseudo_ids == [2]
        assert state.oracle_count == 0

    def test_labeled_overlapping_unlabeled_rejected(self):
        """An id cannot be labeled and unlabeled at once."""
        with pytest.raises(ValidationError):
            PoolState(labeled=[_record(0)], unlabeled_ids=[InstanceId(0)])

    def test_pseudo_outside_unlabeled_rejected(self):
        """Pseudo ids must stay inside D^U."""
        with pytest.raises(ValidationError):
            PoolState(
                pseudo=[_record(5, LabelSource.PSEUDO, confidence=0.99)],
                unlabeled_ids=[InstanceId(4)],
            )

    def test_duplicate_labeled_rejected(self):
        """D^L holds each id once."""
        with pytest.raises(ValidationError):
            PoolState(labeled=[_record(0), _record(0)])

    def test_pseudo_record_in_labeled_rejected(self):
        """D^L holds only seed and oracle records."""
        with pytest.raises(ValidationError):
            PoolState(labeled=[_record(0, LabelSource.PSEUDO, confidence=0.99)])


class TestSoftmaxHead:
    """Tests for SoftmaxHead."""

    def test_zeros(self):
        """A zero head has the requested shape."""
        head = SoftmaxHead.zeros(4, 3)
        assert head.class_count == 4
        assert head.feature_dim == 3
        assert not head.weights.any()

    def test_parameters_are_read_only(self):
        """Heads are immutable values."""
        head = SoftmaxHead.zeros(2, 2)
        with pytest.raises(ValueError):
            head.weights[0, 0] = 1.0

    def test_caller_array_not_frozen(self):
        """Construction copies, so the caller's array stays writable."""
        weights = np.ones((2, 3))
        SoftmaxHead(weights=weights, bias=np.zeros(2))
        weights[0, 0] = 5.0
        assert weights[0, 0] == 5.0

    def test_non_finite_rejected(self):
        """Every parameter must be finite."""
        with pytest.raises(ValidationError):
            SoftmaxHead(weights=np.array([[np.nan]]), bias=np.zeros(1))

    def test_shape_mismatch_rejected(self):
        """Bias length must equal the class count."""
        with pytest.raises(ValidationError):
            SoftmaxHead(weights=np.zeros((3, 2)), bias=np.zeros(2))

    def test_checkpoint_round_trip(self):
        """Checkpoints restore bitwise-equal parameters."""
        rng = np.random.default_rng(0)
        head = SoftmaxHead(weights=rng.normal(size=(3, 5)), bias=rng.normal(size=3))
        payload = head.to_checkpoint()
        assert payload["format_version"] == 1
        assert len(payload["weights"]) == 15
        assert SoftmaxHead.from_checkpoint(payload).equals(head)

    def test_checkpoint_version_checked(self):
        """Unknown checkpoint versions are refused."""
        payload = SoftmaxHead.zeros(2, 2).to_checkpoint()
        payload["format_version"] = 99
        with pytest.raises(ValueError):
            SoftmaxHead.from_checkpoint(payload)


class TestTrainConfig:
    """Tests for TrainConfig defaults and bounds."""

    def test_defaults(self):
        """Defaults follow the reference protocol."""
        config = TrainConfig()
        assert config.epochs == 15
        assert config.batch_size == 32
        assert config.learning_rate == 0.05
        assert config.pseudo_weight == 1.0
        assert config.warm_start is True

    @pytest.mark.parametrize(
        "field, value",
        [("epochs", 0), ("batch_size", 0), ("pseudo_weight", 1.5), ("learning_rate", -0.1)],
    )
    def test_out_of_range_rejected(self, field, value):
        """Bounds are enforced at construction."""
        with pytest.raises(ValidationError):
            TrainConfig(**{field: value})

    def test_unknown_field_rejected(self):
        """Configs forbid extra keys."""
        with pytest.raises(ValidationError):
            TrainConfig(momentum=0.9)


class TestRunConfig:
    """Tests for RunConfig."""

    def test_budget_below_batch_rejected(self):
        """A non-zero budget smaller than k is a config error."""
        with pytest.raises(ValidationError):
            RunConfig(budget=5, strategy=StrategyConfig(batch_k=20))

    def test_zero_budget_allowed(self):
        """m = 0 runs the seed round only."""
        assert RunConfig(budget=0).budget == 0

    def test_default_pseudo_cap(self):
        """Pseudo cap defaults to five times k."""
        assert RunConfig().effective_pseudo_cap == 100
        assert RunConfig(pseudo_cap=7).effective_pseudo_cap == 7

    def test_with_overrides_merges_nested(self):
        """Nested overrides keep untouched siblings."""
        base = RunConfig(strategy=StrategyConfig(beta=2.0))
        updated = base.with_overrides({"strategy": {"batch_k": 10}, "seed": 3})
        assert updated.strategy.beta == 2.0
        assert updated.strategy.batch_k == 10
        assert updated.seed == 3

    def test_with_overrides_validates(self):
        """Overrides go through validation again."""
        with pytest.raises(ValidationError):
            RunConfig().with_overrides({"confidence_threshold": 1.5})

    def test_least_confidence_alias(self):
        """Both lc and least_confidence name the same measure."""
        config = StrategyConfig(uncertainty_kind="least_confidence")
        assert config.uncertainty_kind == UncertaintyKind.LEAST_CONFIDENCE


class TestLedgerAndScores:
    """Tests for BudgetLedger and ScoredInstance bounds."""

    def test_spent_above_budget_rejected(self):
        """oracle_spent can never exceed the budget."""
        with pytest.raises(ValidationError):
            BudgetLedger(
                oracle_budget=5, oracle_spent=6, per_round_query_cap=1, pseudo_cap_per_round=0
            )

    def test_scored_instance_rejects_nan(self):
        """Scores must be finite."""
        with pytest.raises(ValidationError):
            ScoredInstance(id=InstanceId(0), uncertainty=0.5, density=0.1, hybrid=float("nan"))
