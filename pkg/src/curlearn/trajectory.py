"""How importance weights evolve over a training run.

A trajectory is the sequence of importance vectors snapshotted at
validation steps.  Analysis splits the run into three stages (early,
middle, late) by snapshot position, summarizes each stage by its mean
weight per index, and clusters indices whose weight curves move together.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, ParseError, ValidationError
from .filtering import complete_linkage_clusters
from .trainer import TrainRecord

STAGES = ("early", "middle", "late")
STAGE_PAIRS = (("early", "middle"), ("middle", "late"), ("early", "late"))
# guards the relative-change denominator when the earlier stage mean is ~0
RELATIVE_EPS = 1e-6


@dataclass(frozen=True)
class RhoTrajectory:
    steps: tuple[int, ...]
    values: np.ndarray  # snapshots x indices
    index_names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.values.ndim != 2:
            raise ValidationError("trajectory values must be 2-dimensional")
        if self.values.shape[0] != len(self.steps):
            raise ValidationError("one snapshot row per step required")
        if self.values.shape[1] != len(self.index_names):
            raise ValidationError("one column per index name required")
        if any(b <= a for a, b in zip(self.steps, self.steps[1:])):
            raise ValidationError("steps must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("trajectory values must be finite")

    @classmethod
    def from_record(cls, record: TrainRecord) -> "RhoTrajectory":
        return cls(
            steps=tuple(record.rho_steps),
            values=np.array(record.rho_values) if record.rho_values else np.empty((0, len(record.index_names))),
            index_names=tuple(record.index_names),
        )

    @property
    def n_snapshots(self) -> int:
        return len(self.steps)


def load_rho_trajectory(path: str) -> RhoTrajectory:
    """Read the step,index_name,rho CSV a training run writes."""
    by_step: dict[int, dict[str, float]] = {}
    names_in_order: list[str] = []
    seen_names = set()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["step", "index_name", "rho"]:
            raise ParseError(f"{path}: expected header 'step,index_name,rho'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ParseError(f"{path}:{lineno}: expected 3 fields")
            try:
                step = int(row[0])
                value = float(row[2])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: bad step or rho") from None
            name = row[1]
            if name not in seen_names:
                seen_names.add(name)
                names_in_order.append(name)
            entry = by_step.setdefault(step, {})
            if name in entry:
                raise ValidationError(
                    f"{path}:{lineno}: duplicate value for step {step}, index {name!r}"
                )
            entry[name] = value
    steps = sorted(by_step)
    values = np.empty((len(steps), len(names_in_order)))
    for i, step in enumerate(steps):
        entry = by_step[step]
        missing = [n for n in names_in_order if n not in entry]
        if missing:
            raise ValidationError(
                f"{path}: step {step} lacks a value for index {missing[0]!r}"
            )
        values[i] = [entry[n] for n in names_in_order]
    return RhoTrajectory(
        steps=tuple(steps), values=values, index_names=tuple(names_in_order)
    )


def stage_bounds(n_snapshots: int) -> list[tuple[int, int]]:
    """Snapshot ranges of the three stages; the remainder joins the last."""
    if n_snapshots < 3:
        raise ArgumentError("stage analysis needs at least three snapshots")
    base = n_snapshots // 3
    return [(0, base), (base, 2 * base), (2 * base, n_snapshots)]


def stage_means(traj: RhoTrajectory) -> np.ndarray:
    """3-by-k matrix of mean weight per stage per index."""
    bounds = stage_bounds(traj.n_snapshots)
    return np.stack([traj.values[lo:hi].mean(axis=0) for lo, hi in bounds])


def top_indices_per_stage(
    traj: RhoTrajectory, k_top: int = 3
) -> dict[str, list[tuple[str, float]]]:
    """The k_top highest-mean indices of every stage, ties ordered by name."""
    if k_top < 1:
        raise ArgumentError("k_top must be positive")
    means = stage_means(traj)
    out = {}
    for stage, row in zip(STAGES, means):
        ranked = sorted(
            zip(traj.index_names, row.tolist()), key=lambda p: (-p[1], p[0])
        )
        out[stage] = ranked[:k_top]
    return out


@dataclass(frozen=True)
class ChangeRow:
    index_name: str
    stage_pair: str
    change: float
    relative_change: float
    direction: str  # rising | falling | flat


def max_change_indices(traj: RhoTrajectory) -> list[ChangeRow]:
    """Every index's largest between-stage move, biggest movers first.

    The relative change divides by the earlier stage's magnitude, floored
    at a small epsilon so near-zero starts do not explode the ratio.
    """
    means = stage_means(traj)
    stage_pos = {name: i for i, name in enumerate(STAGES)}
    rows = []
    for j, name in enumerate(traj.index_names):
        best = None
        for early, late in STAGE_PAIRS:
            delta = means[stage_pos[late], j] - means[stage_pos[early], j]
            if best is None or abs(delta) > abs(best[0]):
                best = (delta, early, late)
        delta, early, late = best
        relative = delta / max(abs(means[stage_pos[early], j]), RELATIVE_EPS)
        direction = "rising" if delta > 0 else ("falling" if delta < 0 else "flat")
        rows.append(
            ChangeRow(
                index_name=name,
                stage_pair=f"{early}_to_{late}",
                change=float(delta),
                relative_change=float(relative),
                direction=direction,
            )
        )
    rows.sort(key=lambda r: (-abs(r.change), r.index_name))
    return rows


def trajectory_distance_matrix(traj: RhoTrajectory) -> np.ndarray:
    """Mean absolute gap between two indices' weight curves, per index pair."""
    if traj.n_snapshots == 0:
        raise ArgumentError("cannot compare empty trajectories")
    V = traj.values
    D = np.mean(np.abs(V[:, :, None] - V[:, None, :]), axis=0)
    D = (D + D.T) / 2.0
    np.fill_diagonal(D, 0.0)
    return D


def cluster_trajectories(traj: RhoTrajectory, threshold: float = 0.3) -> np.ndarray:
    """Group indices whose weight curves stay within threshold on average."""
    return complete_linkage_clusters(trajectory_distance_matrix(traj), threshold)


def write_stage_report(traj: RhoTrajectory, path: str, k_top: int = 3) -> None:
    top = top_indices_per_stage(traj, k_top)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("stage\trank\tindex\tmean_rho\n")
        for stage in STAGES:
            for rank, (name, value) in enumerate(top[stage], start=1):
                fh.write(f"{stage}\t{rank}\t{name}\t{value!r}\n")


def write_change_report(traj: RhoTrajectory, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("index\tstage_pair\tchange\trelative_change\n")
        for row in max_change_indices(traj):
            fh.write(
                f"{row.index_name}\t{row.stage_pair}\t{row.change!r}\t"
                f"{row.relative_change!r}\n"
            )


def write_trajectory_clusters(
    traj: RhoTrajectory, labels: np.ndarray, path: str
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("index\tcluster\n")
        for name, label in zip(traj.index_names, labels):
            fh.write(f"{name}\t{int(label)}\n")
