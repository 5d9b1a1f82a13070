"""The active learning loop: fit, score, select, query, pseudo-label, evaluate.

Every report row is one call of ``run_round``. Round 0 always runs (with no
queries when the budget is 0); later rounds run while the oracle allowance
and the unlabeled pool last and the rounds limit is not hit. A closing fit
on the final D^L and D^H fills the run summary.
"""

import logging
import time
from collections.abc import Callable
from typing import NamedTuple

import numpy as np

from poolal.core.contracts.oracle import LabelOracle
from poolal.core.contracts.query_strategy import QueryStrategy, Selection
from poolal.core.errors import IntegrityError, InvalidConfigError, PoolExhaustedError
from poolal.core.models.dataset import Dataset
from poolal.core.models.head import Metrics, SoftmaxHead, TrainConfig
from poolal.core.models.ids import InstanceId, SelectorKind
from poolal.core.models.ledger import BudgetLedger, PseudoAssignment
from poolal.core.models.pool import PoolState
from poolal.core.models.report import RoundRecord, RunReport, RunSummary
from poolal.core.models.run import OracleConfig, RunConfig
from poolal.core.models.snapshot import RunSnapshot
from poolal.core.models.strategy import StrategyConfig
from poolal.core.util.seeding import derive_seed
from poolal.engine.budget_annotator import (
    assign_pseudo_labels,
    new_ledger,
    record_pseudo,
    remaining_allowance,
    to_label_records,
)
from poolal.engine.classifier import Batch, evaluate, nll_loss, predict_proba_batch, sgd_fit
from poolal.engine.oracle import SimulatedOracle
from poolal.engine.pools import (
    advance_round,
    commit_oracle_labels,
    init_pools,
    rebuild_pseudo_set,
)
from poolal.engine.strategies import HybridQueryStrategy

logger = logging.getLogger(__name__)


class RoundOutcome(NamedTuple):
    """Everything one round produced."""

    state: PoolState
    head: SoftmaxHead
    ledger: BudgetLedger
    record: RoundRecord
    selection: Selection
    pseudo: list[PseudoAssignment]


def random_baseline_strategy(state: PoolState, k: int, rng_seed: int) -> list[InstanceId]:
    """Uniform sample of min(k, |D^U|) ids without replacement.

    Raises:
        PoolExhaustedError: If D^U is empty.
    """
    if k < 1:
        raise InvalidConfigError(f"k must be >= 1, got {k}", field="batch_k")
    if not state.unlabeled_ids:
        raise PoolExhaustedError("no unlabeled instances left to sample")
    pool = np.asarray(state.unlabeled_ids, dtype=np.int64)
    drawn = np.random.default_rng(rng_seed).choice(pool, size=min(k, len(pool)), replace=False)
    return [InstanceId(int(i)) for i in drawn]


class RandomQueryStrategy(QueryStrategy):
    """Passive-learning control: ignore the model, sample D^U uniformly."""

    name = "random"

    def select(
        self,
        head: SoftmaxHead,
        dataset: Dataset,
        state: PoolState,
        k: int,
        rng_seed: int,
    ) -> Selection:
        return Selection(ids=random_baseline_strategy(state, k, rng_seed))


def build_strategy(config: StrategyConfig, workers: int = 1) -> QueryStrategy:
    if config.selector == SelectorKind.RANDOM:
        return RandomQueryStrategy()
    return HybridQueryStrategy(config, workers=workers)


def strategy_label(config: RunConfig) -> str:
    """Stable identifier of the strategy a config runs, e.g. ``hybrid-entropy-b1+budget``."""
    base = build_strategy(config.strategy).name
    return f"{base}+budget" if config.pseudo_enabled else base


def training_batch(dataset: Dataset, state: PoolState, pseudo_weight: float) -> Batch:
    """D^L with weight 1 followed by D^H with weight lambda."""
    ids = state.labeled_ids + state.pseudo_ids
    labels = [r.label for r in state.labeled] + [r.label for r in state.pseudo]
    weights = [1.0] * len(state.labeled) + [pseudo_weight] * len(state.pseudo)
    return Batch.of(dataset.features_of(ids), labels, weights)


def _fit(
    dataset: Dataset,
    state: PoolState,
    head: SoftmaxHead,
    config: RunConfig,
    round_index: int,
) -> tuple[SoftmaxHead, float]:
    trainset = training_batch(dataset, state, config.train.pseudo_weight)
    start = head if config.train.warm_start else SoftmaxHead.zeros(
        dataset.class_count, dataset.feature_dim
    )
    shuffle_seed = derive_seed(config.seed, "train", config.train.shuffle_seed, round_index)
    train_config = config.train.model_copy(update={"shuffle_seed": shuffle_seed})
    fitted = sgd_fit(start, trainset, train_config)
    return fitted, nll_loss(fitted, trainset)


def _pseudo_accuracy(dataset: Dataset, state: PoolState) -> float | None:
    if not state.pseudo:
        return None
    truth = dataset.labels_of(state.pseudo_ids)
    assigned = np.asarray([r.label for r in state.pseudo])
    return float(np.mean(truth == assigned))


def run_round(
    dataset: Dataset,
    state: PoolState,
    head: SoftmaxHead,
    ledger: BudgetLedger,
    config: RunConfig,
    oracle: LabelOracle,
    strategy: QueryStrategy | None = None,
) -> RoundOutcome:
    """One pass of train, score, select, label, pseudo-label and evaluate.

    The batch is clamped to min(k, remaining allowance, |D^U|); a round with
    nothing to query still fits and evaluates. The pseudo set is rebuilt
    with the head fitted in this round.
    """
    started = time.perf_counter()
    r = state.round
    strategy = strategy or build_strategy(config.strategy)

    # (1) fit on D^L and the previous round's D^H
    head, train_loss = _fit(dataset, state, head, config, r)

    # (2)-(3) score D^U and select
    k = min(config.strategy.batch_k, remaining_allowance(ledger), len(state.unlabeled_ids))
    selection = Selection()
    if k > 0:
        selection = strategy.select(head, dataset, state, k, derive_seed(config.seed, "select", r))

    # (4) ask the oracle and commit
    answers, ledger = oracle.query_batch(list(selection.ids), ledger)
    state = commit_oracle_labels(state, answers, round=r, class_count=dataset.class_count)

    # (5) rebuild D^H from the fresh head
    pseudo: list[PseudoAssignment] = []
    if config.pseudo_enabled and state.unlabeled_ids:
        probs = predict_proba_batch(head, dataset.features_of(state.unlabeled_ids))
        pseudo = assign_pseudo_labels(
            dict(zip(state.unlabeled_ids, probs)),
            ledger.confidence_threshold,
            ledger.pseudo_cap_per_round,
        )
        ledger = record_pseudo(ledger, len(pseudo))
    state = rebuild_pseudo_set(state, to_label_records(pseudo, r))

    # (6) evaluate
    metrics = evaluate(head, dataset.test_features, dataset.test_labels)
    elapsed_ms = int((time.perf_counter() - started) * 1000)
    record = RoundRecord(
        round=r,
        test_accuracy=metrics.accuracy,
        train_loss=train_loss,
        oracle_spent=ledger.oracle_spent,
        pseudo_count=len(state.pseudo),
        pseudo_accuracy=_pseudo_accuracy(dataset, state),
        wall_time_ms=elapsed_ms if config.record_timing else 0,
        queried_ids=[int(i) for i in selection.ids],
    )
    logger.debug(
        "round %d: acc=%.4f loss=%.4f spent=%d pseudo=%d (%d ms)",
        r,
        metrics.accuracy,
        train_loss,
        ledger.oracle_spent,
        len(state.pseudo),
        elapsed_ms,
    )
    return RoundOutcome(
        state=advance_round(state, r + 1),
        head=head,
        ledger=ledger,
        record=record,
        selection=selection,
        pseudo=pseudo,
    )


RoundObserver = Callable[["ActiveLearningLoop", RoundOutcome], None]


class ActiveLearningLoop:
    """Stateful driver around ``run_round`` with snapshot and resume.

    Rounds are strictly sequential; only candidate scoring inside a round
    fans out to ``workers`` threads.
    """

    def __init__(
        self,
        dataset: Dataset,
        config: RunConfig,
        variant: str = "",
        workers: int = 1,
        oracle: LabelOracle | None = None,
    ):
        self.dataset = dataset
        self.config = config
        self.variant = variant
        self.strategy = build_strategy(config.strategy, workers=workers)
        self.oracle = oracle or SimulatedOracle(dataset, self._oracle_config())
        self.state = init_pools(
            dataset, config.seed_count, derive_seed(config.seed, "seed-draw")
        )
        self.head = SoftmaxHead.zeros(dataset.class_count, dataset.feature_dim)
        self.ledger = new_ledger(
            config.budget,
            config.strategy.batch_k,
            config.effective_pseudo_cap,
            config.confidence_threshold,
        )
        self.rounds: list[RoundRecord] = []

    def _oracle_config(self) -> OracleConfig:
        seed = derive_seed(self.config.seed, "oracle", self.config.oracle.rng_seed)
        return self.config.oracle.model_copy(update={"rng_seed": seed})

    @classmethod
    def from_snapshot(
        cls,
        dataset: Dataset,
        snapshot: RunSnapshot,
        variant: str = "",
        workers: int = 1,
    ) -> "ActiveLearningLoop":
        """Rebuild a loop positioned at the start of ``snapshot.next_round``.

        Raises:
            IntegrityError: If the snapshot was taken on a different dataset.
        """
        if snapshot.dataset_digest != dataset.digest:
            raise IntegrityError(snapshot.dataset_digest, dataset.digest)
        loop = cls(dataset, snapshot.config, variant=variant, workers=workers)
        loop.state = snapshot.pool
        loop.head = SoftmaxHead.from_checkpoint(snapshot.head)
        loop.ledger = snapshot.ledger
        loop.oracle = SimulatedOracle(
            dataset, loop._oracle_config(), queries_answered=snapshot.oracle_queries
        )
        loop.rounds = list(snapshot.rounds)
        return loop

    def stop_reason(self) -> str | None:
        """Why the loop should not run another round, or None to continue."""
        limit = self.config.rounds_limit
        if limit is not None and self.state.round >= limit:
            return "rounds_limit"
        if self.state.round == 0:
            return None
        if remaining_allowance(self.ledger) <= 0:
            return "budget"
        if not self.state.unlabeled_ids:
            return "pool"
        return None

    def step(self) -> RoundOutcome:
        outcome = run_round(
            self.dataset,
            self.state,
            self.head,
            self.ledger,
            self.config,
            self.oracle,
            self.strategy,
        )
        self.state, self.head, self.ledger = outcome.state, outcome.head, outcome.ledger
        self.rounds.append(outcome.record)
        return outcome

    def snapshot(self) -> RunSnapshot:
        return RunSnapshot(
            dataset_digest=self.dataset.digest,
            config=self.config,
            next_round=self.state.round,
            pool=self.state,
            ledger=self.ledger,
            head=self.head.to_checkpoint(),
            oracle_queries=self.oracle.queries_answered,
            rounds=list(self.rounds),
        )

    def finish(self, termination: str) -> RunReport:
        """Closing fit on the final D^L and D^H, then the report."""
        head, _ = _fit(self.dataset, self.state, self.head, self.config, self.state.round)
        self.head = head
        metrics = evaluate(head, self.dataset.test_features, self.dataset.test_labels)
        logger.info(
            "finished after %d rounds (%s): acc=%.4f spent=%d",
            len(self.rounds),
            termination,
            metrics.accuracy,
            self.ledger.oracle_spent,
        )
        return RunReport(
            dataset_digest=self.dataset.digest,
            variant=self.variant,
            seed=self.config.seed,
            strategy=strategy_label(self.config),
            rounds=list(self.rounds),
            summary=RunSummary(
                final_accuracy=metrics.accuracy,
                final_nll=metrics.mean_nll,
                oracle_spent=self.ledger.oracle_spent,
                labeled_count=len(self.state.labeled),
                pseudo_count=len(self.state.pseudo),
                rounds=len(self.rounds),
                termination=termination,
            ),
        )

    def run(self, observer: RoundObserver | None = None) -> RunReport:
        while (reason := self.stop_reason()) is None:
            outcome = self.step()
            if observer is not None:
                observer(self, outcome)
        return self.finish(reason)


def run_experiment(
    dataset: Dataset,
    config: RunConfig,
    variant: str = "",
    workers: int = 1,
    observer: RoundObserver | None = None,
) -> RunReport:
    """Run one experiment from the seed draw to the closing evaluation."""
    return ActiveLearningLoop(dataset, config, variant=variant, workers=workers).run(observer)


def train_full_pool(
    dataset: Dataset, train: TrainConfig, seed: int = 0
) -> tuple[SoftmaxHead, Metrics]:
    """Fit a zero-initialized head on the whole labelled training split.

    This is the ceiling a label-efficient run is measured against.
    """
    trainset = Batch.of(dataset.train_features, dataset.train_labels)
    config = train.model_copy(update={"shuffle_seed": derive_seed(seed, "full-pool")})
    head = sgd_fit(SoftmaxHead.zeros(dataset.class_count, dataset.feature_dim), trainset, config)
    return head, evaluate(head, dataset.test_features, dataset.test_labels)
