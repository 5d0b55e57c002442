"""Per-index importance weights estimated from validation losses.

Two routes produce a weight vector over the index columns: plain Pearson
correlation of each column against the per-sample loss, and an
L1-regularized least-squares fit solved by cyclic coordinate descent.  The
regularized objective is the unnormalized form

    ||l - Z rho||_2^2 + lam * ||rho||_1

so lam is on the scale of squared loss units, not per-sample means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError

METHODS = ("correlation", "optimization")


def pearson(x, y) -> float:
    """Sample Pearson correlation, defined as 0 when either side is constant.

    The result is clamped into [-1, 1] to absorb floating-point overshoot.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ArgumentError("pearson expects two 1-d arrays of equal length")
    if x.size < 2:
        raise ArgumentError("pearson needs at least two observations")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ArgumentError("pearson inputs must be finite")
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(np.dot(xc, xc))
    syy = float(np.dot(yc, yc))
    if sxx == 0.0 or syy == 0.0:
        return 0.0
    r = float(np.dot(xc, yc)) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


@dataclass(frozen=True)
class ImportanceVector:
    """A weight per index column, tagged with how and when it was estimated."""

    rho: np.ndarray
    method: str
    step: int | None = None
    lam: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "rho", np.asarray(self.rho, dtype=np.float64))
        if self.method not in METHODS:
            raise ArgumentError(f"method must be one of {METHODS}, got {self.method!r}")
        if not np.all(np.isfinite(self.rho)):
            raise ArgumentError("importance weights must be finite")


def estimate_rho_correlation(Z: np.ndarray, losses: np.ndarray) -> ImportanceVector:
    """Correlate every index column with the loss vector."""
    Z = np.asarray(Z, dtype=np.float64)
    losses = np.asarray(losses, dtype=np.float64)
    if Z.ndim != 2 or losses.ndim != 1 or Z.shape[0] != losses.size:
        raise ArgumentError("Z must be n-by-k and losses length n")
    rho = np.array([pearson(Z[:, j], losses) for j in range(Z.shape[1])])
    return ImportanceVector(rho=rho, method="correlation")


def soft_threshold(value: float, amount: float) -> float:
    if value > amount:
        return value - amount
    if value < -amount:
        return value + amount
    return 0.0


def estimate_rho_lasso(
    Z: np.ndarray,
    losses: np.ndarray,
    lam: float = 0.01,
    tol: float = 1e-8,
    max_sweeps: int = 10000,
) -> ImportanceVector:
    """Cyclic coordinate descent on the L1-penalized least-squares fit.

    Coordinates are visited in fixed ascending order; the solve stops when
    no coordinate moved more than ``tol`` in a full sweep, or after
    ``max_sweeps`` sweeps.  Columns with zero norm keep a zero weight.
    """
    Z = np.asarray(Z, dtype=np.float64)
    losses = np.asarray(losses, dtype=np.float64)
    if Z.ndim != 2 or losses.ndim != 1 or Z.shape[0] != losses.size:
        raise ArgumentError("Z must be n-by-k and losses length n")
    if lam < 0:
        raise ArgumentError("lam must be non-negative")
    if not (np.all(np.isfinite(Z)) and np.all(np.isfinite(losses))):
        raise ArgumentError("lasso inputs must be finite")
    k = Z.shape[1]
    gram = Z.T @ Z
    corr = Z.T @ losses
    col_sq = np.diag(gram).copy()
    rho = np.zeros(k)
    half_lam = lam / 2.0
    for _ in range(max_sweeps):
        max_change = 0.0
        for j in range(k):
            if col_sq[j] == 0.0:
                continue
            # partial residual correlation with column j, excluding its own term
            cj = corr[j] - float(gram[j] @ rho) + col_sq[j] * rho[j]
            new = soft_threshold(cj, half_lam) / col_sq[j]
            change = abs(new - rho[j])
            if change > max_change:
                max_change = change
            rho[j] = new
        if max_change < tol:
            break
    return ImportanceVector(rho=rho, method="optimization", lam=lam)


def lasso_objective(Z: np.ndarray, losses: np.ndarray, rho: np.ndarray, lam: float) -> float:
    resid = losses - Z @ rho
    return float(resid @ resid) + lam * float(np.sum(np.abs(rho)))


def best_single_index(
    Z: np.ndarray, losses: np.ndarray, rho: ImportanceVector | np.ndarray
) -> int:
    """The column whose lone weighted fit leaves the smallest residual.

    Ties resolve to the lowest column position.
    """
    Z = np.asarray(Z, dtype=np.float64)
    losses = np.asarray(losses, dtype=np.float64)
    if isinstance(rho, ImportanceVector):
        rho = rho.rho
    rho = np.asarray(rho, dtype=np.float64)
    if Z.ndim != 2 or Z.shape[1] != rho.size or Z.shape[0] != losses.size:
        raise ArgumentError("shapes disagree")
    if Z.shape[1] == 0:
        raise ArgumentError("need at least one index column")
    resid = losses[:, None] - Z * rho[None, :]
    norms = np.sum(resid**2, axis=0)
    return int(np.argmin(norms))
