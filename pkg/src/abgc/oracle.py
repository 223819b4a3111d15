"""Dense, approximation-free reference computations for tests and audits.

Nothing here imports the pipeline kernels: each routine rebuilds what it
needs from dense arrays so that it can serve as an independent check.
Sizes are capped; these are O(n^2) to O(k^n) procedures.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

MAX_FEATURE_NODES = 500
MAX_MSA_NODES = 2000
MAX_PARTITION_NODES = 10
MAX_PARTITION_K = 4


def dense_normalized_adjacency(b: np.ndarray) -> np.ndarray:
    b = np.asarray(b, dtype=np.float64)
    du = b.sum(axis=1)
    dv = b.sum(axis=0)
    su = np.divide(1.0, np.sqrt(du), out=np.zeros_like(du), where=du > 0)
    sv = np.divide(1.0, np.sqrt(dv), out=np.zeros_like(dv), where=dv > 0)
    return su[:, None] * b * sv[None, :]


def exact_features(
    l_dense: np.ndarray, x: np.ndarray, alpha: float, gamma_large: int = 200
) -> np.ndarray:
    """``(1 - alpha) sum_{r=0}^{gamma} alpha^r (L L^T)^r X`` by explicit dense powers."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] > MAX_FEATURE_NODES:
        raise ValueError(f"exact_features is capped at {MAX_FEATURE_NODES} nodes")
    m = l_dense @ l_dense.T
    term = x.copy()
    total = x.copy()
    for r in range(1, gamma_large + 1):
        term = alpha * (m @ term)
        total += term
    return (1.0 - alpha) * total


def exact_msa_matrix(zhat: np.ndarray) -> np.ndarray:
    """Symmetric softmax affinity between all pairs of feature rows."""
    zhat = np.asarray(zhat, dtype=np.float64)
    if zhat.shape[0] > MAX_MSA_NODES:
        raise ValueError(f"exact_msa_matrix is capped at {MAX_MSA_NODES} nodes")
    k = np.exp(zhat @ zhat.T)
    a = np.sqrt(k.sum(axis=1))
    return k / np.outer(a, a)


def clustering_objective(s: np.ndarray, labels) -> float:
    """Sum over clusters of the size-normalized affinity leaving the cluster.

    Empty labels are skipped.
    """
    labels = np.asarray(labels)
    total = 0.0
    for c in np.unique(labels):
        inside = labels == c
        total += s[np.ix_(inside, ~inside)].sum() / inside.sum()
    return float(total)


def nci_from_labels(labels, k: int | None = None) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    k = int(labels.max()) + 1 if k is None else k
    y = np.zeros((labels.size, k))
    y[np.arange(labels.size), labels] = 1.0
    sizes = y.sum(axis=0)
    return y / np.where(sizes > 0, np.sqrt(sizes), 1.0)


def trace_objective(s: np.ndarray, y) -> float:
    """``Tr(Y^T S Y)`` for an NCI matrix (array or object with ``.y``)."""
    y = np.asarray(getattr(y, "y", y), dtype=np.float64)
    return float(np.trace(y.T @ s @ y))


def restricted_growth_strings(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All set partitions of ``n`` items into exactly ``k`` nonempty blocks.

    Each partition is produced once, as the label string whose first
    occurrences appear in increasing order.
    """
    if n == 0:
        if k == 0:
            yield ()
        return
    labels = [0] * n

    def rec(i: int, used: int):
        if n - i < k - used:
            return
        if i == n:
            if used == k:
                yield tuple(labels)
            return
        for c in range(min(used + 1, k)):
            labels[i] = c
            yield from rec(i + 1, max(used, c + 1))

    yield from rec(1, 1) if k >= 1 else iter(())


def brute_force_best_partition(s: np.ndarray, k: int) -> np.ndarray:
    """Exhaustive minimizer of the cut objective over partitions into ``k`` clusters."""
    s = np.asarray(s, dtype=np.float64)
    n = s.shape[0]
    if n > MAX_PARTITION_NODES or k > MAX_PARTITION_K:
        raise ValueError(
            f"brute force is capped at n<={MAX_PARTITION_NODES}, k<={MAX_PARTITION_K}"
        )
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must lie in [1, {n}]")
    parts = np.array(list(restricted_growth_strings(n, k)), dtype=np.int64)
    rowsum = s.sum(axis=1)
    obj = np.zeros(parts.shape[0])
    for c in range(k):
        member = (parts == c).astype(np.float64)
        size = member.sum(axis=1)
        within = np.einsum("pi,ij,pj->p", member, s, member)
        obj += (member @ rowsum - within) / size
    return parts[int(np.argmin(obj))]


def lemma3_bound_check(x: np.ndarray, b_dense: np.ndarray, alpha: float, d: int) -> float:
    """Worst ratio of the inner-product error caused by rank-``d`` attribute
    truncation to its bound ``sigma_{d+1}^2 sqrt(D_i D_j) / (1 - alpha)``.

    Features are the converged series ``(1 - alpha)(I - alpha L L^T)^{-1} X``
    computed with an exact SVD. Errors at round-off level count as zero; a
    nonzero error against a zero bound gives an infinite ratio.
    """
    x = np.asarray(x, dtype=np.float64)
    b = np.asarray(b_dense, dtype=np.float64)
    n = x.shape[0]
    l = dense_normalized_adjacency(b)
    prop = (1.0 - alpha) * np.linalg.inv(np.eye(n) - alpha * (l @ l.T))
    u, sv, vt = np.linalg.svd(x, full_matrices=False)
    sigma_next = sv[d] if d < sv.size else 0.0
    if sigma_next <= 1e-10 * sv[0]:
        sigma_next = 0.0
    x_red = u[:, :d] * sv[:d]
    z = prop @ x
    z_red = prop @ x_red
    err = np.abs(z_red @ z_red.T - z @ z.T)
    deg = b.sum(axis=1)
    bound = sigma_next**2 * np.sqrt(np.outer(deg, deg)) / (1.0 - alpha)
    tiny = 1e-12 * max(1.0, float(np.abs(z @ z.T).max()))
    ratio = np.zeros_like(err)
    live = err > tiny
    pos = live & (bound > 0)
    ratio[pos] = err[pos] / bound[pos]
    ratio[live & ~pos] = np.inf
    return float(ratio.max())
