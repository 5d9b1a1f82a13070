"""Unit tests for the active learning loop."""

import logging
from collections import Counter

import numpy as np
import pytest

from poolal.core.errors import IntegrityError, InvalidConfigError, PoolExhaustedError
from poolal.core.models.dataset import SyntheticSpec
from poolal.core.models.head import SoftmaxHead, TrainConfig
from poolal.core.models.ids import InstanceId, LabelSource, SelectorKind, UncertaintyKind
from poolal.core.models.pool import LabelRecord, PoolState
from poolal.core.models.run import OracleConfig, RunConfig
from poolal.core.models.snapshot import RunSnapshot
from poolal.core.models.strategy import StrategyConfig
from poolal.core.util.seeding import derive_seed
from poolal.data.synthetic import generate_synthetic
from poolal.engine.al_loop import (
    ActiveLearningLoop,
    random_baseline_strategy,
    run_experiment,
    run_round,
    train_full_pool,
    training_batch,
)
from poolal.engine.budget_annotator import new_ledger
from poolal.engine.classifier import Batch, predict_proba_batch, sgd_fit
from poolal.engine.oracle import SimulatedOracle
from poolal.engine.pools import init_pools
from poolal.engine.strategies import uncertainty_scores


@pytest.fixture(scope="module")
def medium_dataset():
    """3 classes, d=4: 144 train / 36 test instances."""
    return generate_synthetic(
        SyntheticSpec(class_count=3, feature_dim=4, per_class=60, separation=6.0, rng_seed=3)
    )


def _state(unlabeled: list[int]) -> PoolState:
    return PoolState(unlabeled_ids=[InstanceId(i) for i in unlabeled])


class TestRandomBaseline:
    """Tests for the passive-learning control."""

    def test_k_beyond_pool_returns_all(self):
        """k >= |D^U| returns every remaining id."""
        assert sorted(random_baseline_strategy(_state([3, 1, 2]), 10, 0)) == [1, 2, 3]

    def test_seeded(self):
        """Same seed, same sample."""
        state = _state(list(range(50)))
        assert random_baseline_strategy(state, 5, 7) == random_baseline_strategy(state, 5, 7)

    def test_empty_pool(self):
        """Sampling from an empty D^U is an error."""
        with pytest.raises(PoolExhaustedError):
            random_baseline_strategy(_state([]), 1, 0)

    def test_invalid_k(self):
        """k must be positive."""
        with pytest.raises(InvalidConfigError):
            random_baseline_strategy(_state([1, 2]), 0, 0)

    def test_uniformity(self):
        """10,000 draws of k=1 from 10 ids hit each about 10% of the time."""
        state = _state(list(range(10)))
        counts = Counter(random_baseline_strategy(state, 1, seed)[0] for seed in range(10_000))
        for i in range(10):
            assert abs(counts[i] / 10_000 - 0.1) <= 0.01


class TestRunRound:
    """Tests for a single round."""

    def test_one_round_on_thirty_instances(self, tiny_dataset, fast_config):
        """One round moves k ids from D^U to D^L and appends a report row."""
        assert tiny_dataset.train_size == 30
        state = init_pools(tiny_dataset, fast_config.seed_count, rng_seed=0)
        head = SoftmaxHead.zeros(tiny_dataset.class_count, tiny_dataset.feature_dim)
        ledger = new_ledger(fast_config.budget, 4, fast_config.effective_pseudo_cap)
        oracle = SimulatedOracle(tiny_dataset, OracleConfig())

        outcome = run_round(tiny_dataset, state, head, ledger, fast_config, oracle)

        assert len(outcome.state.labeled) == len(state.labeled) + 4
        assert len(outcome.state.unlabeled_ids) == len(state.unlabeled_ids) - 4
        assert outcome.ledger.oracle_spent == 4
        assert outcome.record.round == 0
        assert outcome.state.round == 1
        assert set(outcome.record.queried_ids) <= set(state.unlabeled_ids)
        new = outcome.state.labeled[-4:]
        assert all(r.source == LabelSource.ORACLE for r in new)

    def test_round_line_logged_at_debug(self, tiny_dataset, fast_config):
        """The per-round summary stays below INFO; the CLI console owns that line."""
        records: list[logging.LogRecord] = []
        handler = logging.Handler()
        handler.emit = records.append
        loop_logger = logging.getLogger("poolal.engine.al_loop")
        loop_logger.addHandler(handler)
        previous = loop_logger.level
        loop_logger.setLevel(logging.DEBUG)
        try:
            state = init_pools(tiny_dataset, fast_config.seed_count, rng_seed=0)
            head = SoftmaxHead.zeros(tiny_dataset.class_count, tiny_dataset.feature_dim)
            ledger = new_ledger(fast_config.budget, 4, fast_config.effective_pseudo_cap)
            run_round(tiny_dataset, state, head, ledger, fast_config,
                      SimulatedOracle(tiny_dataset, OracleConfig()))
        finally:
            loop_logger.removeHandler(handler)
            loop_logger.setLevel(previous)
        round_lines = [r for r in records if r.getMessage().startswith("round 0:")]
        assert round_lines
        assert all(r.levelno == logging.DEBUG for r in round_lines)

    def test_batch_clamped_to_allowance(self, tiny_dataset, fast_config):
        """A round queries at most the remaining allowance."""
        state = init_pools(tiny_dataset, 6, rng_seed=0)
        head = SoftmaxHead.zeros(tiny_dataset.class_count, tiny_dataset.feature_dim)
        ledger = new_ledger(6, 4, 20).model_copy(update={"oracle_spent": 5})
        oracle = SimulatedOracle(tiny_dataset, OracleConfig())
        outcome = run_round(tiny_dataset, state, head, ledger, fast_config, oracle)
        assert len(outcome.record.queried_ids) == 1
        assert outcome.ledger.oracle_spent == 6

    def test_pseudo_disabled(self, tiny_dataset, fast_config):
        """Without the annotator D^H stays empty."""
        config = fast_config.model_copy(update={"pseudo_enabled": False})
        state = init_pools(tiny_dataset, 6, rng_seed=0)
        head = SoftmaxHead.zeros(tiny_dataset.class_count, tiny_dataset.feature_dim)
        ledger = new_ledger(config.budget, 4, 20)
        oracle = SimulatedOracle(tiny_dataset, OracleConfig())
        outcome = run_round(tiny_dataset, state, head, ledger, config, oracle)
        assert outcome.state.pseudo == []
        assert outcome.record.pseudo_accuracy is None

    def test_pseudo_labels_are_confident(self, medium_dataset):
        """Every pseudo-label clears tau and stays in D^U."""
        config = RunConfig(
            strategy=StrategyConfig(batch_k=10, density_sample=50),
            train=TrainConfig(epochs=10),
            budget=40,
            seed_count=12,
            confidence_threshold=0.9,
        )
        loop = ActiveLearningLoop(medium_dataset, config)
        while loop.stop_reason() is None:
            outcome = loop.step()
            assert all(r.confidence >= 0.9 for r in outcome.state.pseudo)
            assert set(outcome.state.pseudo_ids) <= set(outcome.state.unlabeled_ids)
            assert len(outcome.state.pseudo) <= config.effective_pseudo_cap
        report = loop.finish(loop.stop_reason() or "budget")
        assert report.summary is not None

    def test_training_batch_weights(self, tiny_dataset):
        """Pseudo examples carry lambda, labeled ones 1."""
        state = init_pools(tiny_dataset, 6, rng_seed=0)
        target = state.unlabeled_ids[0]
        pseudo = LabelRecord(
            instance_id=target, label=1, source=LabelSource.PSEUDO, round=0, confidence=0.99
        )
        state = state.model_copy(update={"pseudo": [pseudo]})
        batch = training_batch(tiny_dataset, state, 0.25)
        assert batch.weights.tolist() == [1.0] * 6 + [0.25]
        assert batch.labels[-1] == 1


class TestRunExperiment:
    """Tests for whole experiments."""

    def test_zero_budget(self, tiny_dataset, fast_config):
        """m = 0 yields only the seed-trained round."""
        config = fast_config.model_copy(update={"budget": 0})
        report = run_experiment(tiny_dataset, config)
        assert len(report.rounds) == 1
        assert report.rounds[0].oracle_spent == 0
        assert report.rounds[0].queried_ids == []
        assert report.summary.termination == "budget"

    def test_budget_arithmetic(self, medium_dataset):
        """m = 100, k = 20 runs exactly 5 query rounds."""
        config = RunConfig(
            strategy=StrategyConfig(batch_k=20, density_sample=50),
            train=TrainConfig(epochs=2),
            budget=100,
            seed_count=10,
        )
        report = run_experiment(medium_dataset, config)
        assert len(report.rounds) == 5
        assert [r.oracle_spent for r in report.rounds] == [20, 40, 60, 80, 100]
        assert report.summary.oracle_spent == 100
        assert report.summary.termination == "budget"

    def test_conservation(self, tiny_dataset, fast_config):
        """|D^L| = seed_count + oracle_spent after any run."""
        report = run_experiment(tiny_dataset, fast_config)
        s = report.summary
        assert s.labeled_count == fast_config.seed_count + s.oracle_spent
        assert all(r.oracle_spent <= fast_config.budget for r in report.rounds)

    def test_pool_exhaustion(self, tiny_dataset, fast_config):
        """A budget larger than the pool stops when D^U runs dry."""
        config = fast_config.model_copy(update={"budget": 1000})
        report = run_experiment(tiny_dataset, config)
        assert report.summary.termination == "pool"
        assert report.summary.oracle_spent == 24
        assert report.summary.labeled_count == 30

    def test_rounds_limit(self, tiny_dataset, fast_config):
        """The rounds limit caps the report length."""
        config = fast_config.model_copy(update={"rounds_limit": 2, "budget": 1000})
        report = run_experiment(tiny_dataset, config)
        assert len(report.rounds) == 2
        assert report.summary.termination == "rounds_limit"

    def test_deterministic(self, tiny_dataset, fast_config):
        """Same config and seed give byte-identical reports."""
        a = run_experiment(tiny_dataset, fast_config)
        b = run_experiment(tiny_dataset, fast_config)
        assert a.model_dump_json() == b.model_dump_json()

    def test_seed_changes_run(self, tiny_dataset, fast_config):
        """A different master seed draws a different seed set."""
        a = run_experiment(tiny_dataset, fast_config)
        b = run_experiment(tiny_dataset, fast_config.model_copy(update={"seed": 1}))
        assert a.model_dump_json() != b.model_dump_json()

    def test_wall_time_hidden_by_default(self, tiny_dataset, fast_config):
        """Wall time is 0 unless timing is requested."""
        report = run_experiment(tiny_dataset, fast_config)
        assert all(r.wall_time_ms == 0 for r in report.rounds)

    def test_workers_do_not_change_results(self, medium_dataset):
        """Scoring threads leave the report unchanged."""
        config = RunConfig(
            strategy=StrategyConfig(batch_k=10, density_sample=20),
            train=TrainConfig(epochs=2),
            budget=30,
            seed_count=10,
        )
        a = run_experiment(medium_dataset, config, workers=1)
        b = run_experiment(medium_dataset, config, workers=3)
        assert a.model_dump_json() == b.model_dump_json()

    def test_random_selector(self, tiny_dataset, fast_config):
        """The random selector runs through the same loop."""
        config = fast_config.with_overrides({"strategy": {"selector": "random"}})
        report = run_experiment(tiny_dataset, config)
        assert report.strategy == "random+budget"
        assert config.strategy.selector == SelectorKind.RANDOM
        assert report.summary.oracle_spent == fast_config.budget

    def test_cold_start(self, tiny_dataset, fast_config):
        """Re-initializing every round still completes."""
        config = fast_config.with_overrides({"train": {"warm_start": False}})
        report = run_experiment(tiny_dataset, config)
        assert report.summary.oracle_spent == fast_config.budget

    def test_observer_called_per_round(self, tiny_dataset, fast_config):
        """The observer sees every round."""
        seen: list[int] = []
        report = run_experiment(
            tiny_dataset, fast_config, observer=lambda loop, o: seen.append(o.record.round)
        )
        assert seen == [r.round for r in report.rounds]


class TestSnapshotResume:
    """Tests for pausing and resuming a run."""

    def test_resume_matches_uninterrupted(self, medium_dataset):
        """A run resumed from a JSON snapshot reproduces the full report."""
        config = RunConfig(
            strategy=StrategyConfig(batch_k=10, density_sample=30),
            train=TrainConfig(epochs=3),
            budget=50,
            seed_count=10,
            oracle=OracleConfig(noise_rate=0.2),
        )
        full = run_experiment(medium_dataset, config)

        loop = ActiveLearningLoop(medium_dataset, config)
        loop.step()
        loop.step()
        snapshot = RunSnapshot.model_validate_json(loop.snapshot().model_dump_json())
        resumed = ActiveLearningLoop.from_snapshot(medium_dataset, snapshot).run()
        assert resumed.model_dump_json() == full.model_dump_json()

    def test_digest_mismatch(self, tiny_dataset, small_dataset, fast_config):
        """Snapshots only resume on the dataset they were taken on."""
        loop = ActiveLearningLoop(tiny_dataset, fast_config)
        loop.step()
        with pytest.raises(IntegrityError):
            ActiveLearningLoop.from_snapshot(small_dataset, loop.snapshot())


class TestClassicalEquivalence:
    """With pseudo off, beta = 0 and k = 1 the loop is plain uncertainty sampling."""

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_literal_loop(self, tiny_dataset, seed):
        """Queried ids equal a line-by-line uncertainty-sampling loop."""
        train = TrainConfig(epochs=3, batch_size=4)
        config = RunConfig(
            strategy=StrategyConfig(beta=0.0, batch_k=1, density_sample=10),
            train=train,
            budget=12,
            seed_count=3,
            pseudo_enabled=False,
            seed=seed,
        )
        report = run_experiment(tiny_dataset, config)
        queried = [i for r in report.rounds for i in r.queried_ids]

        # literal transcription: learn on D^L, query argmax uncertainty, add, repeat
        state = init_pools(tiny_dataset, 3, derive_seed(seed, "seed-draw"))
        labeled_ids = list(state.labeled_ids)
        labeled_y = [r.label for r in state.labeled]
        unlabeled = list(state.unlabeled_ids)
        head = SoftmaxHead.zeros(tiny_dataset.class_count, tiny_dataset.feature_dim)
        expected = []
        for r in range(12):
            shuffle = derive_seed(seed, "train", train.shuffle_seed, r)
            head = sgd_fit(
                head,
                Batch.of(tiny_dataset.features_of(labeled_ids), labeled_y),
                train.model_copy(update={"shuffle_seed": shuffle}),
            )
            probs = predict_proba_batch(head, tiny_dataset.features_of(unlabeled))
            scores = uncertainty_scores(probs, UncertaintyKind.ENTROPY).tolist()
            best = max(range(len(unlabeled)), key=lambda j: (scores[j], -unlabeled[j]))
            chosen = unlabeled.pop(best)
            expected.append(chosen)
            labeled_ids.append(chosen)
            labeled_y.append(int(tiny_dataset.labels_of([chosen])[0]))

        assert queried == expected


class TestFullPool:
    """Tests for the full-pool ceiling."""

    def test_ceiling_on_separated_clusters(self, medium_dataset):
        """Well-separated clusters are learned almost perfectly."""
        _, metrics = train_full_pool(medium_dataset, TrainConfig())
        assert metrics.accuracy >= 0.9

    def test_ceiling_deterministic(self, medium_dataset):
        """The ceiling head depends only on its inputs."""
        a, _ = train_full_pool(medium_dataset, TrainConfig(epochs=2), seed=1)
        b, _ = train_full_pool(medium_dataset, TrainConfig(epochs=2), seed=1)
        assert a.equals(b)
        assert np.all(np.isfinite(a.weights))
