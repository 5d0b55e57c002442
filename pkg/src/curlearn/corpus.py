"""Datasets and per-sample index matrices.

A dataset is a JSONL file, one record per line, with fields ``id``, ``text``,
optional ``text_pair``, ``label`` (0-based integer) and ``split`` (one of
``train``/``validation``/``test``).  An index matrix is a CSV keyed by
``sample_id`` whose remaining columns are real-valued complexity indices,
one row per sample.  Matrices are standardized column-wise on statistics
fitted from one split (normally train) and applied frozen to the rest.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    AlignmentError,
    ArgumentError,
    CoverageError,
    ParseError,
    ValidationError,
)

log = logging.getLogger(__name__)

SPLITS = ("train", "validation", "test")


@dataclass(frozen=True)
class Sample:
    id: str
    text: str
    label: int
    split: str
    text_pair: str | None = None


class Dataset:
    """Samples grouped by split, preserving file order within each split."""

    def __init__(self, samples: list[Sample]):
        seen: set[str] = set()
        for s in samples:
            if s.id in seen:
                raise ValidationError(f"duplicate sample id {s.id!r}")
            seen.add(s.id)
            if s.split not in SPLITS:
                raise ValidationError(
                    f"sample {s.id!r}: split must be one of {SPLITS}, got {s.split!r}"
                )
            if s.label < 0:
                raise ValidationError(f"sample {s.id!r}: label must be >= 0")
        self._samples = list(samples)
        self._by_split = {sp: [s for s in samples if s.split == sp] for sp in SPLITS}
        self._by_id = {s.id: s for s in samples}

    def __len__(self) -> int:
        return len(self._samples)

    def __iter__(self):
        return iter(self._samples)

    @property
    def all_samples(self) -> list[Sample]:
        """Every sample in original file order, all splits."""
        return list(self._samples)

    @property
    def all_ids(self) -> list[str]:
        return [s.id for s in self._samples]

    def samples(self, split: str) -> list[Sample]:
        self._check_split(split)
        return list(self._by_split[split])

    def ids(self, split: str) -> list[str]:
        return [s.id for s in self.samples(split)]

    def labels(self, split: str) -> np.ndarray:
        return np.array([s.label for s in self.samples(split)], dtype=np.int64)

    def get(self, sample_id: str) -> Sample:
        try:
            return self._by_id[sample_id]
        except KeyError:
            raise CoverageError(f"no sample with id {sample_id!r}") from None

    @property
    def num_classes(self) -> int:
        return max(s.label for s in self._samples) + 1 if self._samples else 0

    @property
    def has_pairs(self) -> bool:
        return any(s.text_pair is not None for s in self._samples)

    def _check_split(self, split: str) -> None:
        if split not in SPLITS:
            raise ArgumentError(f"unknown split {split!r}; expected one of {SPLITS}")


def load_dataset(path: str) -> Dataset:
    """Parse a JSONL dataset file, reporting the line number of any defect."""
    samples = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(rec, dict):
                raise ParseError(f"{path}:{lineno}: record must be a JSON object")
            for key in ("id", "text", "label", "split"):
                if key not in rec:
                    raise ParseError(f"{path}:{lineno}: missing field {key!r}")
            if not isinstance(rec["id"], str):
                raise ParseError(f"{path}:{lineno}: 'id' must be a string")
            if not isinstance(rec["text"], str):
                raise ParseError(f"{path}:{lineno}: 'text' must be a string")
            if not isinstance(rec["label"], int) or isinstance(rec["label"], bool):
                raise ParseError(f"{path}:{lineno}: 'label' must be an integer")
            pair = rec.get("text_pair")
            if pair is not None and not isinstance(pair, str):
                raise ParseError(f"{path}:{lineno}: 'text_pair' must be a string")
            try:
                samples.append(
                    Sample(
                        id=rec["id"],
                        text=rec["text"],
                        label=rec["label"],
                        split=rec["split"],
                        text_pair=pair,
                    )
                )
            except ValidationError:
                raise
    try:
        return Dataset(samples)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from None


@dataclass
class IndexMatrix:
    """A dense n-by-k matrix of index values aligned to a sample order.

    ``zero_variance`` flags columns that were constant on the fitting split;
    after standardization those columns are identically zero and are skipped
    by consumers that pick a single best column.
    """

    sample_ids: list[str]
    index_names: list[str]
    values: np.ndarray
    standardized: bool = False
    means: np.ndarray | None = None
    sigmas: np.ndarray | None = None
    zero_variance: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValidationError("index matrix values must be 2-dimensional")
        n, k = self.values.shape
        if n != len(self.sample_ids):
            raise ValidationError(
                f"matrix has {n} rows but {len(self.sample_ids)} sample ids"
            )
        if k != len(self.index_names):
            raise ValidationError(
                f"matrix has {k} columns but {len(self.index_names)} index names"
            )
        if len(set(self.index_names)) != k:
            raise ValidationError("index names must be unique")
        if not np.all(np.isfinite(self.values)):
            i, j = np.argwhere(~np.isfinite(self.values))[0]
            raise ValidationError(
                f"non-finite value for sample {self.sample_ids[i]!r}, "
                f"index {self.index_names[j]!r}"
            )
        if self.zero_variance is None:
            self.zero_variance = np.zeros(k, dtype=bool)
        else:
            self.zero_variance = np.asarray(self.zero_variance, dtype=bool)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_indices(self) -> int:
        return self.values.shape[1]

    def row_lookup(self) -> dict[str, int]:
        return {sid: i for i, sid in enumerate(self.sample_ids)}

    def rows_for(self, sample_ids: list[str]) -> np.ndarray:
        """Row indices for the given ids, in the given order."""
        lookup = self.row_lookup()
        rows = []
        for sid in sample_ids:
            if sid not in lookup:
                raise CoverageError(f"index matrix has no row for sample {sid!r}")
            rows.append(lookup[sid])
        return np.array(rows, dtype=np.intp)

    def column(self, name: str) -> np.ndarray:
        try:
            j = self.index_names.index(name)
        except ValueError:
            raise CoverageError(
                f"unknown index {name!r}; available: {', '.join(self.index_names)}"
            ) from None
        return self.values[:, j]


def load_index_matrix(path: str, dataset: Dataset) -> IndexMatrix:
    """Load an index CSV and align its rows to the dataset's sample order.

    Every dataset id must appear exactly once; rows for unknown ids are
    dropped with a warning so a matrix extracted for a superset can be
    reused.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if not header or header[0] != "sample_id":
            raise ParseError(f"{path}: first header column must be 'sample_id'")
        names = header[1:]
        if not names:
            raise ParseError(f"{path}: no index columns")
        if len(set(names)) != len(names):
            raise ParseError(f"{path}: duplicate index column names")
        rows: dict[str, list[float]] = {}
        known = set(dataset.all_ids)
        dropped = 0
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}"
                )
            sid = row[0]
            if sid not in known:
                dropped += 1
                continue
            if sid in rows:
                raise ValidationError(f"{path}:{lineno}: duplicate row for id {sid!r}")
            vals = []
            for name, cell in zip(names, row[1:]):
                try:
                    v = float(cell)
                except ValueError:
                    raise ParseError(
                        f"{path}:{lineno}: index {name!r} for sample {sid!r} "
                        f"is not a number: {cell!r}"
                    ) from None
                if not math.isfinite(v):
                    raise ValidationError(
                        f"{path}:{lineno}: non-finite value for sample {sid!r}, "
                        f"index {name!r}"
                    )
                vals.append(v)
            rows[sid] = vals
    if dropped:
        log.warning("%s: dropped %d rows with ids not in the dataset", path, dropped)
    missing = [sid for sid in dataset.all_ids if sid not in rows]
    if missing:
        raise CoverageError(
            f"{path}: missing rows for {len(missing)} samples "
            f"(first: {missing[0]!r})"
        )
    order = dataset.all_ids
    values = np.array([rows[sid] for sid in order], dtype=np.float64)
    return IndexMatrix(sample_ids=list(order), index_names=list(names), values=values)


def write_index_matrix(matrix: IndexMatrix, path: str) -> None:
    """Write a matrix in the same CSV layout load_index_matrix reads."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample_id"] + list(matrix.index_names))
        for sid, row in zip(matrix.sample_ids, matrix.values):
            writer.writerow([sid] + [repr(float(v)) for v in row])


def concatenate_pair_indices(first: IndexMatrix, second: IndexMatrix) -> IndexMatrix:
    """Join per-text matrices of a pair task into one doubled-width matrix.

    Columns of ``first`` get a " (P)" suffix and columns of ``second`` get
    " (H)", matching the premise/hypothesis convention of pair tasks.  Both
    matrices must list the same sample ids in the same order.
    """
    if first.sample_ids != second.sample_ids:
        raise AlignmentError(
            "pair matrices must share sample ids in the same order"
        )
    names = [f"{n} (P)" for n in first.index_names] + [
        f"{n} (H)" for n in second.index_names
    ]
    values = np.hstack([first.values, second.values])
    zv = np.concatenate([first.zero_variance, second.zero_variance])
    return IndexMatrix(
        sample_ids=list(first.sample_ids),
        index_names=names,
        values=values,
        zero_variance=zv,
    )


def standardize(matrix: IndexMatrix, fit_ids: list[str]) -> IndexMatrix:
    """Z-score every column using statistics from the fitting rows only.

    Uses the population variance (divide by n).  Statistics are computed on
    the rows named by ``fit_ids`` and applied to all rows, so held-out
    splits are transformed with frozen parameters.  Columns constant on the
    fitting rows become identically zero and are flagged.
    """
    if not fit_ids:
        raise ArgumentError("fit_ids must be non-empty")
    fit_rows = matrix.rows_for(list(fit_ids))
    fit = matrix.values[fit_rows]
    means = fit.mean(axis=0)
    sigmas = np.sqrt(np.mean((fit - means) ** 2, axis=0))
    zero_var = sigmas == 0.0
    safe = np.where(zero_var, 1.0, sigmas)
    values = (matrix.values - means) / safe
    values[:, zero_var] = 0.0
    return replace(
        matrix,
        values=values,
        standardized=True,
        means=means,
        sigmas=sigmas,
        zero_variance=zero_var | matrix.zero_variance,
    )
