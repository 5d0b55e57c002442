"""Curriculum schedules: loss reweighting curves and subset baselines.

Weight-style curricula turn a difficulty score and the training progress
t in [0, 1] into per-sample weights in (0, 1]; the batch loss is then the
weighted mean.  Subset-style curricula instead pick which sample ids are
eligible at progress t.  All subset rules sort by (difficulty, id) so ties
resolve to the lower id and results are fully deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .difficulty import DifficultyScore
from .errors import ArgumentError, DegenerateBatchError

WEIGHT_KINDS = ("sigmoid", "neg_sigmoid", "gaussian")
SUBSET_KINDS = ("sampling", "competence", "data_selection")
KINDS = ("none",) + WEIGHT_KINDS + SUBSET_KINDS

# data_selection keeps the middle of the difficulty ranking, dropping this
# fraction at each end once warmup has passed
DROP_FRACTION = 0.3


@dataclass(frozen=True)
class CurriculumConfig:
    kind: str = "none"
    beta: float = 10.0
    gamma: float = 8.0
    competence_c0: float = 0.1
    competence_shape: str = "linear"
    warmup_fraction: float = 0.2

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ArgumentError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.beta <= 0:
            raise ArgumentError("beta must be positive")
        if self.gamma <= 0:
            raise ArgumentError("gamma must be positive")
        if not 0.0 < self.competence_c0 <= 1.0:
            raise ArgumentError("competence_c0 must lie in (0, 1]")
        if self.competence_shape not in ("linear", "sqrt"):
            raise ArgumentError("competence_shape must be 'linear' or 'sqrt'")
        if not 0.0 <= self.warmup_fraction < 1.0:
            raise ArgumentError("warmup_fraction must lie in [0, 1)")


def _check_t(t: float, lo_open: bool = False) -> None:
    if not np.isfinite(t) or t < 0.0 or t > 1.0 or (lo_open and t == 0.0):
        lo = "(0" if lo_open else "[0"
        raise ArgumentError(f"training progress t must lie in {lo}, 1], got {t!r}")


def _stable_sigmoid(x: np.ndarray) -> np.ndarray:
    x = np.atleast_1d(x)
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def weight_sigmoid(difficulty, t: float, beta: float = 10.0):
    """Ramp-up weights favouring easy (low difficulty) samples early.

    Computes 1 / (1 + exp(-difficulty - t * beta)); increasing in both the
    score and t.
    """
    _check_t(t)
    s = np.asarray(difficulty, dtype=np.float64)
    w = _stable_sigmoid(s + t * beta)
    return float(w[0]) if np.ndim(difficulty) == 0 else w


def weight_neg_sigmoid(difficulty, t: float, beta: float = 10.0):
    """Mirror image of weight_sigmoid: hard samples gain weight as t grows."""
    _check_t(t)
    s = np.asarray(difficulty, dtype=np.float64)
    w = _stable_sigmoid(t * beta - s)
    return float(w[0]) if np.ndim(difficulty) == 0 else w


def weight_gaussian(difficulty, t: float, gamma: float = 8.0):
    """Bell-shaped weights centred on zero difficulty, widening with t.

    Computes exp(-difficulty^2 / (2 * (1 + t * gamma))), so mid-difficulty
    samples dominate early and extremes are phased in.
    """
    _check_t(t)
    s = np.asarray(difficulty, dtype=np.float64)
    w = np.exp(-(s**2) / (2.0 * (1.0 + t * gamma)))
    return float(w) if np.ndim(difficulty) == 0 else w


def weighted_mean_loss(losses, weights) -> float:
    """Weighted mean with explicit rejection of an all-zero weight batch."""
    losses = np.asarray(losses, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if losses.shape != weights.shape or losses.ndim != 1 or losses.size == 0:
        raise ArgumentError("losses and weights must be equal-length non-empty 1-d")
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise ArgumentError("weights must be finite and non-negative")
    total = float(np.sum(weights))
    if total == 0.0:
        raise DegenerateBatchError("every weight in the batch is zero")
    return float(np.sum(weights * losses)) / total


def _ranked_ids(score: DifficultyScore) -> list[str]:
    if score.sample_ids is None:
        raise ArgumentError("difficulty score carries no sample ids")
    pairs = sorted(zip(score.values.tolist(), score.sample_ids), key=lambda p: (p[0], p[1]))
    return [sid for _, sid in pairs]


def subset_sampling(score: DifficultyScore, t: float) -> set[str]:
    """The ceil(t * n) easiest sample ids at progress t."""
    _check_t(t, lo_open=True)
    ranked = _ranked_ids(score)
    n = len(ranked)
    count = max(1, math.ceil(t * n - 1e-9))
    return set(ranked[: min(count, n)])


def subset_competence(
    score: DifficultyScore,
    t: float,
    c0: float = 0.1,
    shape: str = "linear",
) -> set[str]:
    """Ids whose difficulty rank falls inside the current competence c(t).

    c(t) climbs from c0 to 1, linearly or with a square-root profile, and a
    sample survives when its empirical CDF (rank / n) is at most c(t).  At
    least one sample is always returned so the pool cannot be empty.
    """
    _check_t(t)
    if not 0.0 < c0 <= 1.0:
        raise ArgumentError("c0 must lie in (0, 1]")
    if shape not in ("linear", "sqrt"):
        raise ArgumentError("shape must be 'linear' or 'sqrt'")
    progress = math.sqrt(t) if shape == "sqrt" else t
    c = c0 + (1.0 - c0) * progress
    ranked = _ranked_ids(score)
    n = len(ranked)
    count = int(math.floor(c * n + 1e-9))
    return set(ranked[: max(1, min(count, n))])


def subset_data_selection(
    score: DifficultyScore,
    t: float,
    warmup_fraction: float = 0.2,
) -> set[str]:
    """Everything during warmup, then the middle band of the difficulty ranking.

    After warmup the bottom and top DROP_FRACTION of ranks are discarded.
    Fewer than three samples cannot be banded, so they are all kept.
    """
    _check_t(t)
    ranked = _ranked_ids(score)
    n = len(ranked)
    if t < warmup_fraction or n < 3:
        return set(ranked)
    drop = int(math.floor(DROP_FRACTION * n + 1e-9))
    return set(ranked[drop : n - drop])
