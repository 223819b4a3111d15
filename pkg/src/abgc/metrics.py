"""External clustering quality: ACC under the best label matching, NMI and ARI."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import comb


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray  # k_true x k_pred

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)


def _check(truth, pred):
    truth = np.asarray(truth).ravel()
    pred = np.asarray(pred).ravel()
    if truth.shape != pred.shape:
        raise ValueError(f"length mismatch: {truth.size} truth vs {pred.size} predicted labels")
    return truth, pred


def contingency(truth, pred) -> ContingencyTable:
    truth, pred = _check(truth, pred)
    _, ti = np.unique(truth, return_inverse=True)
    _, pi = np.unique(pred, return_inverse=True)
    counts = np.zeros((ti.max(initial=-1) + 1, pi.max(initial=-1) + 1), dtype=np.int64)
    np.add.at(counts, (ti, pi), 1)
    return ContingencyTable(counts)


def hungarian_assignment(cost: np.ndarray) -> np.ndarray:
    """Permutation ``p`` minimizing ``sum_i cost[i, p[i]]``."""
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise ValueError("cost matrix must be square")
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(cost.shape[0], dtype=np.int64)
    perm[rows] = cols
    return perm


def accuracy(truth, pred) -> float:
    table = contingency(truth, pred).counts
    if table.size == 0:
        return 1.0
    k = max(table.shape)
    square = np.zeros((k, k), dtype=np.int64)
    square[: table.shape[0], : table.shape[1]] = table
    perm = hungarian_assignment(-square)
    return float(square[np.arange(k), perm].sum() / table.sum())


def _entropy(counts: np.ndarray, n: int) -> float:
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def nmi(truth, pred) -> float:
    """Mutual information over the geometric mean of the two entropies."""
    table = contingency(truth, pred)
    n = table.n
    if n == 0:
        return 1.0
    h_t = _entropy(table.row_sums, n)
    h_p = _entropy(table.col_sums, n)
    if h_t == 0.0 or h_p == 0.0:
        # a single cluster on either side carries no information, unless both are
        return 1.0 if h_t == h_p else 0.0
    c = table.counts
    nz = c > 0
    outer = np.outer(table.row_sums, table.col_sums)
    mi = float((c[nz] / n * np.log(n * c[nz] / outer[nz])).sum())
    return float(min(max(mi / np.sqrt(h_t * h_p), 0.0), 1.0))


def ari(truth, pred) -> float:
    table = contingency(truth, pred)
    n = table.n
    pairs = comb(table.counts, 2).sum()
    a = comb(table.row_sums, 2).sum()
    b = comb(table.col_sums, 2).sum()
    total = comb(n, 2)
    expected = a * b / total if total > 0 else 0.0
    max_index = 0.5 * (a + b)
    if max_index == expected:
        return 1.0
    return float((pairs - expected) / (max_index - expected))


def metrics_report(truth, pred) -> dict[str, float]:
    return {"acc": accuracy(truth, pred), "nmi": nmi(truth, pred), "ari": ari(truth, pred)}
