"""Pool transitions: seed draw, oracle commits and pseudo-set rebuilds.

All functions are pure: they take a PoolState and return a new one.
"""

import logging
from collections.abc import Iterable

import numpy as np

from poolal.core.errors import (
    DoubleLabelError,
    InputError,
    InstanceNotFoundError,
    InvalidConfigError,
    PoolError,
    PseudoConflictError,
    StratificationError,
)
from poolal.core.models.dataset import Dataset
from poolal.core.models.ids import InstanceId, LabelSource
from poolal.core.models.pool import LabelRecord, PoolState

logger = logging.getLogger(__name__)


def init_pools(dataset: Dataset, seed_count: int, rng_seed: int) -> PoolState:
    """Draw the initial labeled set D^L from the training split.

    One instance per class is drawn first so every class is represented,
    then the rest of the seed set is drawn uniformly without replacement.

    Args:
        dataset: Source dataset; only its training split is pooled.
        seed_count: Number of seed labels.
        rng_seed: Seed for the draw.

    Returns:
        PoolState at round 0 with an empty pseudo set.

    Raises:
        InvalidConfigError: If seed_count is not in 1..N.
        StratificationError: If seed_count < K or a class has no training instance.
    """
    n = dataset.train_size
    k = dataset.class_count
    if seed_count <= 0 or seed_count > n:
        raise InvalidConfigError(
            f"seed_count must lie in 1..{n}, got {seed_count}", field="seed_count"
        )
    if seed_count < k:
        raise StratificationError(seed_count, k)

    rng = np.random.default_rng(rng_seed)
    ids = dataset.train_ids
    labels = dataset.train_labels

    chosen: list[int] = []
    for cls in range(k):
        members = ids[labels == cls]
        if not len(members):
            raise StratificationError(seed_count, k)
        chosen.append(int(rng.choice(members)))

    rest = np.setdiff1d(ids, np.asarray(chosen, dtype=np.int64))
    extra = rng.choice(rest, size=seed_count - k, replace=False) if seed_count > k else []
    chosen.extend(int(i) for i in extra)
    chosen.sort()

    truth = dataset.labels_of(chosen)
    labeled = [
        LabelRecord(
            instance_id=InstanceId(i),
            label=int(y),
            source=LabelSource.SEED,
            round=0,
        )
        for i, y in zip(chosen, truth)
    ]
    unlabeled = np.setdiff1d(ids, np.asarray(chosen, dtype=np.int64))
    logger.debug("Seed draw: %d labeled, %d unlabeled", len(labeled), len(unlabeled))
    return PoolState(
        labeled=labeled,
        pseudo=[],
        unlabeled_ids=[InstanceId(int(i)) for i in unlabeled],
        round=0,
    )


def commit_oracle_labels(
    state: PoolState,
    assignments: Iterable[tuple[int, int]],
    round: int,
    class_count: int | None = None,
) -> PoolState:
    """Move oracle-labeled ids from D^U (and D^H, if present) into D^L.

    Args:
        state: Current pool state.
        assignments: (instance_id, label) pairs returned by the oracle.
        round: Round index recorded on the new LabelRecords.
        class_count: When given, labels are checked against 0..K-1.

    Returns:
        New PoolState; untouched records keep their order.

    Raises:
        DoubleLabelError: If an id is already labeled or repeated in the batch.
        InstanceNotFoundError: If an id is not in the pool.
        InputError: If a label falls outside 0..K-1.
    """
    pairs = list(assignments)
    if not pairs:
        return state

    labeled_ids = set(state.labeled_ids)
    unlabeled = set(state.unlabeled_ids)
    new_records: list[LabelRecord] = []
    committed: set[int] = set()
    for instance_id, label in pairs:
        if instance_id in labeled_ids or instance_id in committed:
            raise DoubleLabelError(instance_id)
        # pseudo ids are a subset of unlabeled, so this covers both
        if instance_id not in unlabeled:
            raise InstanceNotFoundError(instance_id)
        if class_count is not None and not 0 <= label < class_count:
            raise InputError(f"label {label} outside 0..{class_count - 1}")
        committed.add(instance_id)
        new_records.append(
            LabelRecord(
                instance_id=InstanceId(instance_id),
                label=int(label),
                source=LabelSource.ORACLE,
                round=round,
            )
        )

    return PoolState(
        labeled=[*state.labeled, *new_records],
        pseudo=[r for r in state.pseudo if r.instance_id not in committed],
        unlabeled_ids=[i for i in state.unlabeled_ids if i not in committed],
        round=state.round,
    )


def rebuild_pseudo_set(state: PoolState, assignments: Iterable[LabelRecord]) -> PoolState:
    """Replace D^H wholesale with a fresh set of pseudo-labels.

    The previous pseudo set is discarded; D^U is left unchanged so
    pseudo-labeled instances stay eligible for oracle queries.

    Raises:
        PseudoConflictError: If a record targets a labeled id, an id outside
            D^U, a repeated id, or is not a pseudo record.
    """
    records = list(assignments)
    labeled_ids = set(state.labeled_ids)
    unlabeled = set(state.unlabeled_ids)
    seen: set[int] = set()
    for record in records:
        if record.source != LabelSource.PSEUDO:
            raise PseudoConflictError(record.instance_id)
        if record.instance_id in labeled_ids or record.instance_id not in unlabeled:
            raise PseudoConflictError(record.instance_id)
        if record.instance_id in seen:
            raise PseudoConflictError(record.instance_id)
        seen.add(record.instance_id)

    return PoolState(
        labeled=list(state.labeled),
        pseudo=records,
        unlabeled_ids=list(state.unlabeled_ids),
        round=state.round,
    )


def advance_round(state: PoolState, round: int) -> PoolState:
    """Return the same partition stamped with a new round index."""
    return state.model_copy(update={"round": round})


def check_partition(state: PoolState, dataset: Dataset) -> None:
    """Assert that D^L and D^U partition the training split exactly.

    Raises:
        PoolError: If an id is missing, foreign to the training split, or duplicated.
    """
    labeled = set(state.labeled_ids)
    unlabeled = set(state.unlabeled_ids)
    covered = labeled | unlabeled
    expected = {int(i) for i in dataset.train_ids}
    if len(covered) != len(labeled) + len(unlabeled):
        raise PoolError("labeled and unlabeled ids overlap")
    if covered != expected:
        missing = len(expected - covered)
        foreign = len(covered - expected)
        raise PoolError(
            f"pool does not cover the training split: {missing} missing, {foreign} foreign"
        )
