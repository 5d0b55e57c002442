"""Per-sample difficulty scores.

A difficulty score is a real per sample, either taken from index columns
combined under an importance vector, or averaged from recorded per-sample
training losses.  Index-based aggregation assumes a standardized matrix.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import IndexMatrix
from .errors import ArgumentError, CoverageError, DegenerateInputError, ParseError
from .importance import ImportanceVector

SOURCES = ("ling_max", "ling_weighted", "loss")


@dataclass(frozen=True)
class DifficultyScore:
    values: np.ndarray
    source: str
    sample_ids: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.source not in SOURCES:
            raise ArgumentError(f"source must be one of {SOURCES}, got {self.source!r}")
        if not np.all(np.isfinite(self.values)):
            raise ArgumentError("difficulty values must be finite")
        if self.sample_ids is not None and len(self.sample_ids) != self.values.size:
            raise ArgumentError("sample_ids length must match values")


def aggregate_max(
    matrix: IndexMatrix,
    importance: ImportanceVector,
    use_magnitude: bool = False,
) -> DifficultyScore:
    """Difficulty from the single most important index column.

    The column with the largest signed weight wins; ties go to the lowest
    column position.  Columns flagged as zero-variance never win.  Passing
    ``use_magnitude=True`` ranks by absolute weight instead, an extension
    beyond the signed default.
    """
    rho = np.asarray(importance.rho, dtype=np.float64)
    if rho.size != matrix.n_indices:
        raise ArgumentError(
            f"importance has {rho.size} weights but matrix has "
            f"{matrix.n_indices} columns"
        )
    eligible = ~matrix.zero_variance
    if not np.any(eligible):
        raise DegenerateInputError("every index column is flagged zero-variance")
    key = np.abs(rho) if use_magnitude else rho
    key = np.where(eligible, key, -np.inf)
    j = int(np.argmax(key))
    return DifficultyScore(
        values=matrix.values[:, j],
        source="ling_max",
        sample_ids=tuple(matrix.sample_ids),
    )


def aggregate_weighted(matrix: IndexMatrix, importance: ImportanceVector) -> DifficultyScore:
    """Difficulty as the weighted column combination, scaled by the weight norm.

    An all-zero weight vector yields all-zero difficulty rather than a
    division error.
    """
    rho = np.asarray(importance.rho, dtype=np.float64)
    if rho.size != matrix.n_indices:
        raise ArgumentError(
            f"importance has {rho.size} weights but matrix has "
            f"{matrix.n_indices} columns"
        )
    norm = float(np.sqrt(np.sum(rho**2)))
    if norm == 0.0:
        values = np.zeros(matrix.n_samples)
    else:
        values = (matrix.values @ rho) / norm
    return DifficultyScore(
        values=values,
        source="ling_weighted",
        sample_ids=tuple(matrix.sample_ids),
    )


def loss_difficulty(
    traces: Mapping[str, Sequence[float]],
    order: Iterable[str] | None = None,
) -> DifficultyScore:
    """Mean of each sample's recorded loss snapshots.

    Every requested sample must have at least one snapshot.
    """
    ids = list(order) if order is not None else list(traces.keys())
    values = np.empty(len(ids))
    for i, sid in enumerate(ids):
        if sid not in traces or len(traces[sid]) == 0:
            raise CoverageError(f"no loss snapshots recorded for sample {sid!r}")
        values[i] = float(np.mean(np.asarray(traces[sid], dtype=np.float64)))
    return DifficultyScore(values=values, source="loss", sample_ids=tuple(ids))


def write_difficulty_csv(score: DifficultyScore, path: str) -> None:
    if score.sample_ids is None:
        raise ArgumentError("difficulty score carries no sample ids to export")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample_id", "score"])
        for sid, val in zip(score.sample_ids, score.values):
            writer.writerow([sid, repr(float(val))])


def load_difficulty_csv(path: str, source: str = "loss") -> DifficultyScore:
    ids = []
    vals = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["sample_id", "score"]:
            raise ParseError(f"{path}: expected header 'sample_id,score'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"{path}:{lineno}: expected 2 fields")
            ids.append(row[0])
            try:
                vals.append(float(row[1]))
            except ValueError:
                raise ParseError(f"{path}:{lineno}: bad score {row[1]!r}") from None
    return DifficultyScore(values=np.array(vals), source=source, sample_ids=tuple(ids))
