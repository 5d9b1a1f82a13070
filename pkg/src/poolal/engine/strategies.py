"""Scoring layer: uncertainty measures, density, hybrid score and batch selection.

Uncertainty measures are normalized to [0, 1] (one-hot -> 0, uniform -> 1)
so the hybrid product is comparable across class counts.
"""

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numpy.typing import ArrayLike, NDArray

from poolal.core.contracts.query_strategy import QueryStrategy, Selection
from poolal.core.errors import (
    InputError,
    InvalidConfigError,
    UndefinedDensityError,
    UndefinedMeasureError,
)
from poolal.core.models.dataset import Dataset
from poolal.core.models.head import SoftmaxHead
from poolal.core.models.ids import InstanceId, UncertaintyKind
from poolal.core.models.pool import PoolState
from poolal.core.models.strategy import ScoredInstance, StrategyConfig
from poolal.engine.classifier import predict_proba_batch

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]

PROB_TOLERANCE = 1e-9


def check_prob_vector(p: ArrayLike) -> FloatArray:
    """Validate a ProbVector: entries in [0, 1] summing to 1 within 1e-9."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InputError(f"expected a non-empty probability vector, got shape {arr.shape}")
    if np.any(arr < 0.0) or np.any(arr > 1.0) or abs(float(arr.sum()) - 1.0) > PROB_TOLERANCE:
        raise InputError("not a probability vector")
    return arr


# --- Uncertainty measures (vectorized over rows) ---


def entropy_scores(probs: FloatArray) -> FloatArray:
    """Normalized entropy H(p) / ln K per row.

    Computed as 1 - KL(p || uniform) / ln K, which is the same quantity but
    lands exactly on 0 for one-hot and 1 for uniform rows.
    """
    k = probs.shape[1]
    if k == 1:
        return np.zeros(probs.shape[0])
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(probs > 0.0, probs * np.log(probs * k), 0.0)
    score = 1.0 - terms.sum(axis=1) / np.log(k)
    return np.clip(score, 0.0, 1.0)


def margin_scores(probs: FloatArray) -> FloatArray:
    """1 - (p_1st - p_2nd) per row."""
    if probs.shape[1] < 2:
        raise UndefinedMeasureError("margin needs at least two classes")
    top = np.sort(probs, axis=1)
    return np.clip(1.0 - (top[:, -1] - top[:, -2]), 0.0, 1.0)


def least_confidence_scores(probs: FloatArray) -> FloatArray:
    """(1 - max p) * K / (K - 1) per row, written as (K - K max p) / (K - 1)."""
    k = probs.shape[1]
    if k < 2:
        raise UndefinedMeasureError("least confidence needs at least two classes")
    return np.clip((k - k * probs.max(axis=1)) / (k - 1), 0.0, 1.0)


_MEASURES = {
    UncertaintyKind.ENTROPY: entropy_scores,
    UncertaintyKind.MARGIN: margin_scores,
    UncertaintyKind.LEAST_CONFIDENCE: least_confidence_scores,
}


def uncertainty_scores(probs: ArrayLike, kind: UncertaintyKind) -> FloatArray:
    """Apply the configured uncertainty measure to every row of ``probs``."""
    return _MEASURES[UncertaintyKind(kind)](np.atleast_2d(np.asarray(probs, dtype=np.float64)))


def entropy_uncertainty(p: ArrayLike) -> float:
    return float(entropy_scores(check_prob_vector(p)[None, :])[0])


def margin_uncertainty(p: ArrayLike) -> float:
    return float(margin_scores(check_prob_vector(p)[None, :])[0])


def least_confidence(p: ArrayLike) -> float:
    return float(least_confidence_scores(check_prob_vector(p)[None, :])[0])


# --- Density ---


def _unit_rows(x: FloatArray) -> FloatArray:
    """Row-normalize; zero-norm rows stay zero so their similarity is 0."""
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    return np.divide(x, norms, out=np.zeros_like(x), where=norms > 0.0)


def density(
    candidate: ArrayLike,
    pool: ArrayLike,
    sample_cap: int,
    rng_seed: int,
) -> float:
    """Mean cosine similarity between ``candidate`` and a sample of ``pool``.

    ``pool`` must not contain the candidate itself. At most ``sample_cap``
    members are compared, drawn without replacement under ``rng_seed``.

    Raises:
        UndefinedDensityError: If the pool is empty.
    """
    pool_arr = np.atleast_2d(np.asarray(pool, dtype=np.float64))
    if pool_arr.shape[0] == 0 or pool_arr.size == 0:
        raise UndefinedDensityError("density needs at least one other pool member")
    c = _unit_rows(np.asarray(candidate, dtype=np.float64)[None, :])[0]
    units = _unit_rows(pool_arr)
    n = units.shape[0]
    if sample_cap < n:
        idx = np.random.default_rng(rng_seed).choice(n, size=sample_cap, replace=False)
        units = units[idx]
    return float(np.clip((units @ c).mean(), -1.0, 1.0))


def pool_densities(
    features: FloatArray,
    ids: Sequence[int],
    sample_cap: int,
    rng_seed: int,
    workers: int = 1,
) -> FloatArray:
    """Density of every pool member against the rest of the pool.

    The subsample for member ``i`` is seeded by (rng_seed, ids[i]), so the
    result does not depend on ``workers`` or on the order members arrive in.
    """
    n = features.shape[0]
    if n < 2:
        raise UndefinedDensityError("density needs at least one other pool member")
    units = _unit_rows(features)
    others = n - 1

    if others <= sample_cap:
        # every other member is compared; use the pool sum instead of n^2 dots
        total = units.sum(axis=0)
        self_sim = np.einsum("ij,ij->i", units, units)
        return np.clip((units @ total - self_sim) / others, -1.0, 1.0)

    def _chunk(rows: NDArray[np.int64]) -> FloatArray:
        out = np.empty(len(rows))
        for j, i in enumerate(rows):
            rng = np.random.default_rng([rng_seed, int(ids[i])])
            idx = rng.choice(others, size=sample_cap, replace=False)
            idx[idx >= i] += 1
            out[j] = (units[idx] @ units[i]).mean()
        return out

    chunks = np.array_split(np.arange(n), max(1, workers))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(_chunk, chunks))
    else:
        parts = [_chunk(c) for c in chunks]
    return np.clip(np.concatenate(parts), -1.0, 1.0)


# --- Combination and selection ---


def hybrid_score(uncertainty: float, density_value: float, beta: float) -> float:
    """uncertainty * max(density, 0) ** beta; beta = 0 reduces to uncertainty."""
    return float(uncertainty * max(density_value, 0.0) ** beta)


def hybrid_scores(uncertainty: FloatArray, densities: FloatArray, beta: float) -> FloatArray:
    return uncertainty * np.power(np.maximum(densities, 0.0), beta)


def select_batch(scored: Sequence[ScoredInstance], k: int) -> list[InstanceId]:
    """The min(k, n) highest hybrid scores, ordered by (score desc, id asc)."""
    if k < 1:
        raise InvalidConfigError(f"k must be >= 1, got {k}", field="batch_k")
    ranked = sorted(scored, key=lambda s: (-s.hybrid, s.id))
    return [s.id for s in ranked[:k]]


def score_candidates(
    head: SoftmaxHead,
    dataset: Dataset,
    candidate_ids: Sequence[int],
    config: StrategyConfig,
    rng_seed: int,
    workers: int = 1,
) -> list[ScoredInstance]:
    """Score every candidate with uncertainty, pool density and the hybrid product."""
    if not len(candidate_ids):
        return []
    features = dataset.features_of(candidate_ids)
    unc = uncertainty_scores(predict_proba_batch(head, features), config.uncertainty_kind)
    if config.beta == 0.0 or len(candidate_ids) == 1:
        # density cannot move the score, or a lone candidate has no pool to be typical of
        dens = np.zeros(len(candidate_ids))
    else:
        dens = pool_densities(features, candidate_ids, config.density_sample, rng_seed, workers)
    hyb = hybrid_scores(unc, dens, config.beta)
    return [
        ScoredInstance(
            id=InstanceId(int(i)),
            uncertainty=float(u),
            density=float(d),
            hybrid=float(h),
        )
        for i, u, d, h in zip(candidate_ids, unc, dens, hyb)
    ]


class HybridQueryStrategy(QueryStrategy):
    """Uncertainty x density^beta scoring followed by top-k selection.

    With beta = 0 and k = 1 this is uncertainty-sampling argmax.
    """

    def __init__(self, config: StrategyConfig, workers: int = 1):
        self._config = config
        self._workers = workers
        self.name = (
            f"hybrid-{config.uncertainty_kind.value}-b{config.beta:g}"
            if config.beta
            else f"uncertainty-{config.uncertainty_kind.value}"
        )

    def select(
        self,
        head: SoftmaxHead,
        dataset: Dataset,
        state: PoolState,
        k: int,
        rng_seed: int,
    ) -> Selection:
        scored = score_candidates(
            head, dataset, state.unlabeled_ids, self._config, rng_seed, self._workers
        )
        if not scored:
            return Selection()
        return Selection(ids=select_batch(scored, k), scored=scored)
