"""Accuracy broken down by difficulty bins.

Samples are placed into equal-width bins of a difficulty value; bins too
small to estimate an accuracy are merged into a neighbour; the balanced
accuracy is the unweighted mean over the surviving bins, which exposes
failure on rare hard samples that plain accuracy averages away.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, UndefinedTrendError


def bin_edges(values, m: int = 10) -> np.ndarray:
    """m + 1 equal-width edges spanning the data; constant data gives one bin."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ArgumentError("cannot bin an empty value array")
    if m < 1:
        raise ArgumentError("bin count must be at least 1")
    lo = float(values.min())
    hi = float(values.max())
    if lo == hi:
        return np.array([lo, hi])
    return np.linspace(lo, hi, m + 1)


def assign_bins(values, edges: np.ndarray) -> np.ndarray:
    """Bin index per value; bins are [lo, hi) except the last, which is closed."""
    values = np.asarray(values, dtype=np.float64)
    nbins = max(len(edges) - 1, 1)
    idx = np.searchsorted(edges, values, side="right") - 1
    return np.clip(idx, 0, nbins - 1)


@dataclass(frozen=True)
class BinReport:
    bin_los: np.ndarray
    bin_his: np.ndarray
    counts: np.ndarray
    accuracies: np.ndarray
    plain_accuracy: float
    balanced_accuracy: float
    trend_slope: float | None
    n: int
    requested_bins: int

    @property
    def n_bins(self) -> int:
        return len(self.counts)


def _merge_small_bins(
    bins: list[dict], min_count: int
) -> list[dict]:
    """Fold undersized bins into an adjacent survivor until all are big enough.

    The lowest-positioned undersized bin is handled first.  With survivors
    on both sides, the larger one absorbs it; at equal size the left one
    does.  A single remaining bin stops the process regardless of size.
    """
    bins = [dict(b) for b in bins]
    while len(bins) > 1:
        small = [i for i, b in enumerate(bins) if b["count"] < min_count]
        if not small:
            break
        i = small[0]
        if i == 0:
            j = 1
        elif i == len(bins) - 1:
            j = i - 1
        else:
            j = i - 1 if bins[i - 1]["count"] >= bins[i + 1]["count"] else i + 1
        left, right = (j, i) if j < i else (i, j)
        merged = {
            "lo": bins[left]["lo"],
            "hi": bins[right]["hi"],
            "count": bins[left]["count"] + bins[right]["count"],
            "correct": bins[left]["correct"] + bins[right]["correct"],
        }
        bins[left : right + 1] = [merged]
    return bins


def binned_balanced_accuracy(
    predictions,
    labels,
    difficulty,
    m: int = 10,
    min_count: int = 5,
) -> BinReport:
    """Per-bin and balanced accuracy of predictions across a difficulty axis."""
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    values = np.asarray(difficulty, dtype=np.float64)
    if not (predictions.shape == labels.shape == values.shape) or values.ndim != 1:
        raise ArgumentError("predictions, labels and difficulty must be equal-length 1-d")
    if values.size == 0:
        raise ArgumentError("cannot evaluate an empty split")
    if min_count < 1:
        raise ArgumentError("min_count must be at least 1")
    correct = predictions == labels
    edges = bin_edges(values, m)
    idx = assign_bins(values, edges)
    nbins = max(len(edges) - 1, 1)
    bins = []
    for b in range(nbins):
        members = idx == b
        bins.append(
            {
                "lo": float(edges[b]),
                "hi": float(edges[b + 1]),
                "count": int(members.sum()),
                "correct": int(correct[members].sum()),
            }
        )
    bins = _merge_small_bins(bins, min_count)
    counts = np.array([b["count"] for b in bins], dtype=np.int64)
    accuracies = np.array(
        [b["correct"] / b["count"] if b["count"] else 0.0 for b in bins]
    )
    plain = float(correct.mean())
    balanced = float(accuracies.mean())
    slope = _ols_slope(accuracies) if len(bins) >= 2 else None
    return BinReport(
        bin_los=np.array([b["lo"] for b in bins]),
        bin_his=np.array([b["hi"] for b in bins]),
        counts=counts,
        accuracies=accuracies,
        plain_accuracy=plain,
        balanced_accuracy=balanced,
        trend_slope=slope,
        n=int(values.size),
        requested_bins=m,
    )


def _ols_slope(y: np.ndarray) -> float:
    x = np.arange(len(y), dtype=np.float64)
    xc = x - x.mean()
    yc = np.asarray(y, dtype=np.float64) - np.mean(y)
    return float(np.dot(xc, yc) / np.dot(xc, xc))


def accuracy_trend_slope(report: BinReport) -> float:
    """Least-squares slope of per-bin accuracy against bin position."""
    if report.n_bins < 2:
        raise UndefinedTrendError(
            "trend slope needs at least two surviving bins"
        )
    return _ols_slope(report.accuracies)


def write_bin_report_csv(report: BinReport, path: str) -> None:
    """Per-bin rows plus a trailing comment line with the summary figures."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("bin_lo,bin_hi,count,accuracy\n")
        for lo, hi, cnt, acc in zip(
            report.bin_los, report.bin_his, report.counts, report.accuracies
        ):
            fh.write(f"{float(lo)!r},{float(hi)!r},{int(cnt)},{float(acc)!r}\n")
        slope = (
            "" if report.trend_slope is None else repr(float(report.trend_slope))
        )
        fh.write(
            f"# n={int(report.n)} plain_accuracy={float(report.plain_accuracy)!r} "
            f"balanced_accuracy={float(report.balanced_accuracy)!r} "
            f"trend_slope={slope}\n"
        )
