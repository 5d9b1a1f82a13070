"""Simulated annotator backed by the dataset's hidden labels."""

import logging

import numpy as np

from poolal.core.contracts.oracle import LabelOracle
from poolal.core.errors import InstanceNotFoundError
from poolal.core.models.dataset import Dataset
from poolal.core.models.ledger import BudgetLedger
from poolal.core.models.run import OracleConfig
from poolal.engine.budget_annotator import charge_queries

logger = logging.getLogger(__name__)


class SimulatedOracle(LabelOracle):
    """Returns the true label, or with probability rho a uniformly random other class.

    The noise draw for the n-th query is seeded by (rng_seed, n), so an
    identical query sequence always yields identical labels, and a resumed
    run only needs the query counter.
    """

    def __init__(self, dataset: Dataset, config: OracleConfig, queries_answered: int = 0):
        self._dataset = dataset
        self._config = config
        self._answered = queries_answered

    @property
    def queries_answered(self) -> int:
        return self._answered

    def query(self, instance_id: int, ledger: BudgetLedger) -> tuple[int, BudgetLedger]:
        if not self._dataset.is_train_id(instance_id):
            raise InstanceNotFoundError(instance_id)
        # charge first so an exhausted ledger reveals nothing
        charged = charge_queries(ledger, 1)

        label = int(self._dataset.labels_of([instance_id])[0])
        k = self._dataset.class_count
        rng = np.random.default_rng([self._config.rng_seed, self._answered])
        flip = rng.random() < self._config.noise_rate
        if flip and k > 1:
            other = int(rng.integers(k - 1))
            label = other if other < label else other + 1
        self._answered += 1
        return label, charged
