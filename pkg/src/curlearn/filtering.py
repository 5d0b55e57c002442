"""Narrowing a large index inventory to the informative columns.

Two complementary filters: ranking indices by how strongly model accuracy
trends across their value range, and clustering near-duplicate indices by
correlation so one representative per cluster survives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corpus import Dataset, IndexMatrix
from .errors import ArgumentError
from .evaluation import binned_balanced_accuracy
from .importance import pearson
from .trainer import TrainRecord, featurize, predict


@dataclass(frozen=True)
class TrendFilterResult:
    ranked_names: list[str]  # every index, strongest trend first
    slopes: list[float]  # aligned with ranked_names, signed
    kept_names: list[str]  # the leading ceil(keep_fraction * k)


def filter_by_trend(
    dataset: Dataset,
    matrix: IndexMatrix,
    baseline: TrainRecord,
    m: int = 10,
    keep_fraction: float = 0.3,
    min_count: int = 5,
    split: str = "validation",
) -> TrendFilterResult:
    """Rank indices by the accuracy trend of a plain baseline across their bins.

    The baseline must have been trained without a curriculum so the trend
    reflects the index, not the schedule.  Indices whose binning collapses
    to a single bin get slope 0 and sink to the bottom.  Ties rank the
    earlier column first.
    """
    if baseline.config.curriculum.kind != "none":
        raise ArgumentError(
            "trend filtering needs a baseline trained with curriculum 'none', "
            f"got {baseline.config.curriculum.kind!r}"
        )
    if not baseline.metric_history:
        raise ArgumentError("baseline record holds no trained checkpoint")
    if not 0.0 < keep_fraction <= 1.0:
        raise ArgumentError("keep_fraction must lie in (0, 1]")
    samples = dataset.samples(split)
    if not samples:
        raise ArgumentError(f"split {split!r} is empty")
    cfg = baseline.config
    X = np.stack(
        [featurize(s, matrix, cfg.concat_indices, cfg.feature_dim) for s in samples]
    )
    y = dataset.labels(split)
    preds = predict(baseline.best_params, X)
    rows = matrix.rows_for([s.id for s in samples])
    slopes = []
    for j in range(matrix.n_indices):
        report = binned_balanced_accuracy(
            preds, y, matrix.values[rows, j], m=m, min_count=min_count
        )
        slopes.append(0.0 if report.trend_slope is None else report.trend_slope)
    order = sorted(range(matrix.n_indices), key=lambda j: (-abs(slopes[j]), j))
    ranked = [matrix.index_names[j] for j in order]
    ranked_slopes = [slopes[j] for j in order]
    keep = max(1, math.ceil(keep_fraction * matrix.n_indices - 1e-9))
    return TrendFilterResult(
        ranked_names=ranked,
        slopes=ranked_slopes,
        kept_names=ranked[:keep],
    )


def correlation_matrix(matrix: IndexMatrix) -> np.ndarray:
    """Pairwise column correlations; constant columns correlate 0 with others.

    The diagonal is exactly 1 and the result is exactly symmetric.
    """
    V = matrix.values
    n, k = V.shape
    if n < 2:
        raise ArgumentError("correlation needs at least two samples")
    centered = V - V.mean(axis=0)
    norms = np.sqrt(np.sum(centered**2, axis=0))
    constant = norms == 0.0
    safe = np.where(constant, 1.0, norms)
    A = centered / safe
    R = A.T @ A
    R = (R + R.T) / 2.0
    R = np.clip(R, -1.0, 1.0)
    R[constant, :] = 0.0
    R[:, constant] = 0.0
    np.fill_diagonal(R, 1.0)
    return R


def correlation_distance(R: np.ndarray) -> np.ndarray:
    """Distance 1 - |r|: identical or opposite columns sit at distance 0."""
    D = 1.0 - np.abs(np.asarray(R, dtype=np.float64))
    np.fill_diagonal(D, 0.0)
    return D


def complete_linkage_clusters(distance: np.ndarray, threshold: float) -> np.ndarray:
    """Agglomerate while the smallest complete-linkage distance fits the threshold.

    Cluster distance is the maximum pairwise member distance, so every
    pair inside a finished cluster is within the threshold.  Merge ties
    pick the pair with the lowest member indices.  Labels are assigned
    0..c-1 in order of each cluster's smallest member.
    """
    D = np.asarray(distance, dtype=np.float64)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ArgumentError("distance must be a square matrix")
    if not np.allclose(D, D.T, atol=1e-12):
        raise ArgumentError("distance matrix must be symmetric")
    if np.any(np.diag(D) != 0.0):
        raise ArgumentError("distance matrix must have a zero diagonal")
    if np.any(D < 0):
        raise ArgumentError("distances must be non-negative")
    if threshold < 0:
        raise ArgumentError("threshold must be non-negative")
    k = D.shape[0]
    # clusters stay sorted by their smallest member, so the first minimal
    # entry in row-major upper-triangle order is also the tie-break winner
    clusters: list[list[int]] = [[i] for i in range(k)]
    CD = D.copy()
    while len(clusters) > 1:
        c = len(clusters)
        rows, cols = np.triu_indices(c, k=1)
        flat = np.argmin(CD[rows, cols])
        dist = CD[rows[flat], cols[flat]]
        if dist > threshold:
            break
        a, b = int(rows[flat]), int(cols[flat])
        clusters[a] = sorted(clusters[a] + clusters[b])
        del clusters[b]
        merged_row = np.maximum(CD[a], CD[b])
        CD[a, :] = merged_row
        CD[:, a] = merged_row
        CD[a, a] = 0.0
        keep = np.arange(c) != b
        CD = CD[np.ix_(keep, keep)]
    labels = np.empty(k, dtype=np.int64)
    for label, members in enumerate(clusters):
        labels[members] = label
    return labels


def select_representatives(
    labels: np.ndarray,
    correlation: np.ndarray,
    index_names: list[str],
    rank_hint: dict[str, float] | None = None,
) -> list[str]:
    """One index name per cluster, ordered by cluster label.

    With a rank hint (say, trend-filter scores) the highest-hinted member
    wins; otherwise the member most correlated on average with the rest of
    its cluster does.  Ties go to the earlier column.
    """
    labels = np.asarray(labels)
    if len(labels) != len(index_names):
        raise ArgumentError("labels and index names disagree in length")
    reps = []
    for label in range(int(labels.max()) + 1):
        members = np.flatnonzero(labels == label)
        if members.size == 0:
            raise ArgumentError(f"cluster labels skip {label}")
        if rank_hint is not None:
            key = [
                (-rank_hint.get(index_names[i], -math.inf), i) for i in members
            ]
        elif members.size == 1:
            key = [(0.0, members[0])]
        else:
            key = []
            for i in members:
                others = members[members != i]
                key.append((-float(np.mean(np.abs(correlation[i, others]))), i))
        _, winner = min(key)
        reps.append(index_names[winner])
    return reps
