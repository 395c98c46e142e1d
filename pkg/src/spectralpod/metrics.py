"""Clustering evaluation: matching accuracy and normalized mutual information."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .exceptions import InputError, SizeError


@dataclass(frozen=True)
class ContingencyTable:
    """Joint label counts: counts[i, j] = #{pred == i and truth == j}."""

    counts: np.ndarray
    n: int


def _check_pair(pred, truth) -> tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred, dtype=int)
    truth = np.asarray(truth, dtype=int)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise SizeError(f"label vectors must match: {pred.shape} vs {truth.shape}")
    if pred.size == 0:
        raise SizeError("need at least one label")
    return pred, truth


def contingency(pred, truth) -> ContingencyTable:
    pred, truth = _check_pair(pred, truth)
    kp = int(pred.max()) + 1
    kt = int(truth.max()) + 1
    counts = np.zeros((kp, kt), dtype=int)
    np.add.at(counts, (pred, truth), 1)
    return ContingencyTable(counts=counts, n=pred.size)


def hungarian(costs: np.ndarray, maximize: bool = False) -> np.ndarray:
    """Optimal one-to-one assignment on a square cost matrix.

    Returns perm with perm[i] = column assigned to row i.
    """
    costs = np.asarray(costs, dtype=float)
    if costs.ndim != 2 or costs.shape[0] != costs.shape[1]:
        raise SizeError(f"cost matrix must be square, got {costs.shape}")
    if not np.isfinite(costs).all():
        raise InputError("cost matrix contains non-finite entries")
    rows, cols = linear_sum_assignment(costs, maximize=maximize)
    perm = np.empty(costs.shape[0], dtype=int)
    perm[rows] = cols
    return perm


def accuracy(pred, truth) -> float:
    """Fraction of agreeing points under the best cluster-to-class matching.

    The contingency table is zero-padded to square, so extra predicted or
    true clusters simply contribute nothing.
    """
    table = contingency(pred, truth)
    kp, kt = table.counts.shape
    size = max(kp, kt)
    padded = np.zeros((size, size))
    padded[:kp, :kt] = table.counts
    perm = hungarian(padded, maximize=True)
    matched = padded[np.arange(size), perm].sum()
    return float(matched) / table.n


def _entropy(counts: np.ndarray, n: int) -> float:
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def nmi(pred, truth) -> float:
    """Mutual information normalized by the mean entropy (natural log).

    Degenerate conventions: two single-cluster partitions score 1.0; if
    exactly one partition has zero entropy the score is 0.0.
    """
    table = contingency(pred, truth)
    n = table.n
    row = table.counts.sum(axis=1)
    col = table.counts.sum(axis=0)
    h_pred = _entropy(row, n)
    h_truth = _entropy(col, n)
    if h_pred == 0.0 and h_truth == 0.0:
        return 1.0
    if h_pred == 0.0 or h_truth == 0.0:
        return 0.0
    mutual = 0.0
    for i, j in zip(*np.nonzero(table.counts)):
        nij = table.counts[i, j]
        mutual += (nij / n) * np.log(nij * n / (row[i] * col[j]))
    return mutual / (0.5 * (h_pred + h_truth))
