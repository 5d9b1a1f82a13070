"""Label oracle contract."""

from abc import ABC, abstractmethod

from poolal.core.models.ledger import BudgetLedger


class LabelOracle(ABC):
    """Abstract base class for label sources.

    Every successful query costs exactly one unit of oracle budget. An
    oracle must refuse a query before revealing anything when the ledger
    cannot pay for it.
    """

    @property
    @abstractmethod
    def queries_answered(self) -> int:
        """Number of labels revealed so far."""
        ...

    @abstractmethod
    def query(self, instance_id: int, ledger: BudgetLedger) -> tuple[int, BudgetLedger]:
        """Reveal a label and charge the ledger.

        Args:
            instance_id: Training-split id to label.
            ledger: Ledger to charge.

        Returns:
            (label, updated ledger).

        Raises:
            BudgetExhaustedError: If the ledger has no allowance left.
        """
        ...

    def query_batch(
        self, instance_ids: list[int], ledger: BudgetLedger
    ) -> tuple[list[tuple[int, int]], BudgetLedger]:
        """Query several ids in order, threading the ledger through."""
        answers: list[tuple[int, int]] = []
        for instance_id in instance_ids:
            label, ledger = self.query(instance_id, ledger)
            answers.append((instance_id, label))
        return answers, ledger
