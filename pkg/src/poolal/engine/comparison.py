"""Strategy comparison: every variant on every seed, then curve statistics."""

import logging
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import Any

import numpy as np
from pydantic import BaseModel, Field

from poolal.core.errors import IntegrityError, InvalidConfigError
from poolal.core.models.dataset import Dataset
from poolal.core.models.report import (
    ComparisonReport,
    PairedDifference,
    RoundStat,
    RunReport,
    VariantResult,
)
from poolal.core.models.run import RunConfig
from poolal.core.util.hashing import hash_text
from poolal.data.embeddings import serialize_dataset
from poolal.engine.al_loop import run_experiment

logger = logging.getLogger(__name__)

VARIANT_PRESETS: dict[str, dict[str, Any]] = {
    "random": {"strategy": {"selector": "random"}, "pseudo_enabled": False},
    "random_budget": {"strategy": {"selector": "random"}, "pseudo_enabled": True},
    "uncertainty": {"strategy": {"selector": "hybrid", "beta": 0.0}, "pseudo_enabled": False},
    "uncertainty_budget": {
        "strategy": {"selector": "hybrid", "beta": 0.0},
        "pseudo_enabled": True,
    },
    "hybrid": {"strategy": {"selector": "hybrid"}, "pseudo_enabled": False},
    "hybrid_budget": {"strategy": {"selector": "hybrid"}, "pseudo_enabled": True},
}


class StrategyVariant(BaseModel):
    """A named patch applied over the base RunConfig."""

    name: str = Field(..., min_length=1)
    overrides: dict[str, Any] = Field(default_factory=dict)

    model_config = {"frozen": True, "extra": "forbid"}

    def apply(self, base: RunConfig, seed: int) -> RunConfig:
        return base.with_overrides({**self.overrides, "seed": seed})


def resolve_variant(name: str) -> StrategyVariant:
    """Look up a preset by name (``hybrid+budget`` is accepted for ``hybrid_budget``).

    Raises:
        InvalidConfigError: If no preset has that name.
    """
    key = name.strip().replace("+", "_").replace("-", "_")
    if key not in VARIANT_PRESETS:
        known = ", ".join(VARIANT_PRESETS)
        raise InvalidConfigError(f"unknown strategy '{name}' (known: {known})", field="strategies")
    return StrategyVariant(name=key, overrides=VARIANT_PRESETS[key])


def _run_one(job: tuple[Dataset, RunConfig, str]) -> tuple[RunReport, str]:
    """Run one job and digest the dataset as this process received it."""
    dataset, config, variant = job
    received = hash_text(serialize_dataset(dataset))
    return run_experiment(dataset, config, variant=variant), received


def _sd(values: Sequence[float]) -> float:
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


def _aggregate(name: str, reports: list[RunReport]) -> VariantResult:
    by_round: dict[int, list[float]] = {}
    for report in reports:
        for row in report.rounds:
            by_round.setdefault(row.round, []).append(row.test_accuracy)
    curve = [
        RoundStat(
            round=r,
            mean_accuracy=float(np.mean(accs)),
            sd_accuracy=_sd(accs),
            runs=len(accs),
        )
        for r, accs in sorted(by_round.items())
    ]
    finals = [r.summary.final_accuracy for r in reports if r.summary is not None]
    return VariantResult(
        name=name,
        curve=curve,
        final_accuracies=finals,
        mean_final_accuracy=float(np.mean(finals)) if finals else 0.0,
        sd_final_accuracy=_sd(finals),
    )


def compare_strategies(
    dataset: Dataset,
    base_config: RunConfig,
    variants: Sequence[StrategyVariant],
    seeds: Sequence[int],
    workers: int = 1,
) -> ComparisonReport:
    """Run the variants x seeds cross product and aggregate the curves.

    Runs are independent, so ``workers > 1`` fans them out to processes;
    the report is identical to a sequential run.

    Raises:
        InvalidConfigError: Fewer than two variants or no seeds.
        IntegrityError: If the data a run actually trained on does not hash to
            ``dataset.digest``.
    """
    names = [v.name for v in variants]
    if len(variants) < 2:
        raise InvalidConfigError("compare needs at least two strategies", field="strategies")
    if not seeds:
        raise InvalidConfigError("compare needs at least one seed", field="seeds")

    jobs = [(dataset, v.apply(base_config, s), v.name) for v in variants for s in seeds]
    logger.info("Comparing %d variants over %d seeds", len(variants), len(seeds))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(_run_one, jobs))
    else:
        outcomes = [_run_one(job) for job in jobs]

    for _, received in outcomes:
        if received != dataset.digest:
            raise IntegrityError(dataset.digest, received)
    reports = [report for report, _ in outcomes]

    n = len(seeds)
    results = [_aggregate(name, reports[i * n : (i + 1) * n]) for i, name in enumerate(names)]

    baseline = results[0]
    paired = []
    for result in results[1:]:
        diffs = [a - b for a, b in zip(result.final_accuracies, baseline.final_accuracies)]
        paired.append(
            PairedDifference(
                variant=result.name,
                baseline=baseline.name,
                seeds=list(seeds),
                differences=diffs,
                mean_difference=float(np.mean(diffs)),
            )
        )

    return ComparisonReport(
        dataset_digest=dataset.digest,
        seeds=list(seeds),
        variants=results,
        paired=paired,
    )
