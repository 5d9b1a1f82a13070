"""Core domain models."""

from poolal.core.models.ids import (
    InstanceId,
    LabelSource,
    SelectorKind,
    Split,
    UncertaintyKind,
)
from poolal.core.models.dataset import Dataset, Instance, SyntheticSpec
from poolal.core.models.pool import LabelRecord, PoolState
from poolal.core.models.head import Metrics, SoftmaxHead, TrainConfig
from poolal.core.models.strategy import ScoredInstance, StrategyConfig
from poolal.core.models.ledger import BudgetLedger, PseudoAssignment
from poolal.core.models.run import OracleConfig, RunConfig
from poolal.core.models.report import (
    ComparisonReport,
    PairedDifference,
    RoundRecord,
    RoundStat,
    RunReport,
    RunSummary,
    VariantResult,
)
from poolal.core.models.snapshot import RunSnapshot

__all__ = [
    # IDs
    "InstanceId",
    "LabelSource",
    "SelectorKind",
    "Split",
    "UncertaintyKind",
    # Data
    "Dataset",
    "Instance",
    "SyntheticSpec",
    # Pools
    "LabelRecord",
    "PoolState",
    # Classifier
    "Metrics",
    "SoftmaxHead",
    "TrainConfig",
    # Strategies
    "ScoredInstance",
    "StrategyConfig",
    # Budget annotator
    "BudgetLedger",
    "PseudoAssignment",
    # Runs
    "OracleConfig",
    "RunConfig",
    "RunSnapshot",
    # Reports
    "ComparisonReport",
    "PairedDifference",
    "RoundRecord",
    "RoundStat",
    "RunReport",
    "RunSummary",
    "VariantResult",
]
