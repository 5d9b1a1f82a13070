"""Budget annotator: confident pseudo-labels for D^H and the oracle cost ledger."""

import logging
from collections.abc import Mapping

import numpy as np
from numpy.typing import ArrayLike

from poolal.core.errors import BudgetExhaustedError, InputError
from poolal.core.models.ids import InstanceId, LabelSource
from poolal.core.models.ledger import BudgetLedger, PseudoAssignment
from poolal.core.models.pool import LabelRecord

logger = logging.getLogger(__name__)


def new_ledger(
    budget: int,
    per_round_query_cap: int,
    pseudo_cap_per_round: int,
    confidence_threshold: float = 0.95,
) -> BudgetLedger:
    """Fresh ledger with nothing spent."""
    return BudgetLedger(
        oracle_budget=budget,
        per_round_query_cap=per_round_query_cap,
        pseudo_cap_per_round=pseudo_cap_per_round,
        confidence_threshold=confidence_threshold,
    )


def assign_pseudo_labels(
    probs: Mapping[int, ArrayLike],
    threshold: float,
    cap: int,
) -> list[PseudoAssignment]:
    """Pseudo-label every instance whose top probability clears ``threshold``.

    Results are ordered by confidence descending, then id ascending, and
    truncated to ``cap``. The label is the argmax class (lowest index on ties).
    """
    if not 0.0 < threshold <= 1.0:
        raise InputError(f"threshold must lie in (0, 1], got {threshold}")
    if cap < 0:
        raise InputError(f"cap must be >= 0, got {cap}")
    if cap == 0 or not probs:
        return []

    confident: list[PseudoAssignment] = []
    for instance_id, p in probs.items():
        arr = np.asarray(p, dtype=np.float64)
        label = int(np.argmax(arr))
        confidence = float(arr[label])
        if confidence >= threshold:
            confident.append(
                PseudoAssignment(
                    instance_id=InstanceId(int(instance_id)),
                    label=label,
                    confidence=confidence,
                )
            )
    confident.sort(key=lambda a: (-a.confidence, a.instance_id))
    return confident[:cap]


def to_label_records(assignments: list[PseudoAssignment], round: int) -> list[LabelRecord]:
    """Wrap pseudo assignments as D^H records for ``rebuild_pseudo_set``."""
    return [
        LabelRecord(
            instance_id=a.instance_id,
            label=a.label,
            source=LabelSource.PSEUDO,
            round=round,
            confidence=a.confidence,
        )
        for a in assignments
    ]


def charge_queries(ledger: BudgetLedger, n: int) -> BudgetLedger:
    """Charge ``n`` oracle queries, all or nothing.

    Raises:
        BudgetExhaustedError: If spent + n would exceed the budget; the
            incoming ledger is left as it was.
    """
    if n < 0:
        raise InputError(f"cannot charge a negative number of queries: {n}")
    if ledger.oracle_spent + n > ledger.oracle_budget:
        raise BudgetExhaustedError(ledger.oracle_budget, ledger.oracle_spent, n)
    if n == 0:
        return ledger
    return ledger.model_copy(update={"oracle_spent": ledger.oracle_spent + n})


def record_pseudo(ledger: BudgetLedger, count: int) -> BudgetLedger:
    """Count pseudo-labels issued; never touches oracle_spent."""
    if count == 0:
        return ledger
    return ledger.model_copy(
        update={"pseudo_assigned_total": ledger.pseudo_assigned_total + count}
    )


def remaining_allowance(ledger: BudgetLedger) -> int:
    """Oracle queries still allowed this round: min(m - spent, k)."""
    return min(ledger.oracle_budget - ledger.oracle_spent, ledger.per_round_query_cap)
