"""Synthetic planted-partition graphs and the seven-researcher golden fixture."""

from __future__ import annotations

import numpy as np

from .graph import BipartiteGraph, from_edges

# Published running example: 7 researchers with 3-d attributes (alpha=0.5,
# gamma=5, k=3). Values are printed to 2 decimals (features) and 3 decimals
# (affinities).
FIXTURE_X = np.array(
    [
        [0.4, 0.3, 0.6],
        [0.4, 0.3, 0.6],
        [0.8, 0.8, 0.9],
        [0.8, 0.6, 0.5],
        [0.8, 0.6, 0.5],
        [0.8, 0.8, 0.9],
        [0.4, 0.8, 1.0],
    ]
)

FIXTURE_ZHAT = np.array(
    [
        [0.53, 0.43, 0.72],
        [0.54, 0.43, 0.72],
        [0.58, 0.54, 0.61],
        [0.67, 0.54, 0.52],
        [0.68, 0.54, 0.49],
        [0.52, 0.56, 0.64],
        [0.37, 0.59, 0.72],
    ]
)

# s(u_{i+1}, u_{j+1}) at row i, column j, exactly as printed. Rounding in the
# source leaves the printed matrix slightly asymmetric (by at most 0.002).
FIXTURE_S_PRINTED = np.array(
    [
        [0.146, 0.146, 0.143, 0.140, 0.139, 0.143, 0.143],
        [0.146, 0.145, 0.143, 0.141, 0.140, 0.143, 0.143],
        [0.142, 0.142, 0.146, 0.146, 0.145, 0.143, 0.142],
        [0.140, 0.141, 0.144, 0.146, 0.147, 0.143, 0.138],
        [0.139, 0.140, 0.144, 0.147, 0.147, 0.142, 0.137],
        [0.143, 0.143, 0.144, 0.143, 0.142, 0.147, 0.146],
        [0.143, 0.143, 0.142, 0.138, 0.137, 0.146, 0.148],
    ]
)
FIXTURE_S = 0.5 * (FIXTURE_S_PRINTED + FIXTURE_S_PRINTED.T)

FIXTURE_PARTITION = np.array([0, 0, 1, 1, 1, 2, 2])
FIXTURE_ALPHA = 0.5
FIXTURE_GAMMA = 5
FIXTURE_K = 3


def running_example_fixture() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(Z-hat 7x3, S 7x7, partition labels)`` from the published example.

    ``S`` is the symmetric part of the printed affinity matrix.
    """
    return FIXTURE_ZHAT.copy(), FIXTURE_S.copy(), FIXTURE_PARTITION.copy()


def _balanced_groups(n: int, k: int) -> np.ndarray:
    return (np.arange(n) * k) // n


def _sample_block(rng, n1: int, n2: int, p: float) -> tuple[np.ndarray, np.ndarray]:
    """Distinct (row, col) pairs of an n1 x n2 Bernoulli(p) block."""
    total = n1 * n2
    if p <= 0.0 or total == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    if p >= 1.0:
        flat = np.arange(total, dtype=np.int64)
    else:
        m = int(rng.binomial(total, p))
        flat = np.sort(rng.choice(total, size=m, replace=False))
    return flat // n2, flat % n2


def planted_partition_abg(
    k: int,
    n_u: int,
    n_v: int,
    p_in: float,
    p_out: float,
    attr_dim: int,
    attr_noise_sigma: float,
    seed: int,
) -> tuple[BipartiteGraph, np.ndarray]:
    """Planted k-cluster bipartite graph with noisy block-centroid attributes.

    U and V are cut into k balanced groups; (u, v) is an edge with
    probability ``p_in`` when the groups match and ``p_out`` otherwise.
    Group g's attribute centroid is the normalized indicator of the g-th
    slice of the attribute dimensions.
    """
    if not 0.0 <= p_out <= p_in <= 1.0:
        raise ValueError(f"need 0 <= p_out <= p_in <= 1, got p_in={p_in}, p_out={p_out}")
    if not 1 <= k <= min(n_u, n_v):
        raise ValueError(f"need 1 <= k <= min(n_u, n_v), got k={k}")
    if attr_dim < k:
        raise ValueError(f"attr_dim must be >= k, got {attr_dim}")
    if attr_noise_sigma < 0:
        raise ValueError("attr_noise_sigma must be >= 0")
    rng = np.random.default_rng(seed)
    gu = _balanced_groups(n_u, k)
    gv = _balanced_groups(n_v, k)
    u_start = np.searchsorted(gu, np.arange(k))
    v_start = np.searchsorted(gv, np.arange(k))
    u_size = np.bincount(gu, minlength=k)
    v_size = np.bincount(gv, minlength=k)

    rows, cols = [], []
    for a in range(k):
        for b in range(k):
            p = p_in if a == b else p_out
            r, c = _sample_block(rng, int(u_size[a]), int(v_size[b]), p)
            rows.append(r + u_start[a])
            cols.append(c + v_start[b])
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)

    dim_group = _balanced_groups(attr_dim, k)
    centroids = (dim_group[None, :] == np.arange(k)[:, None]).astype(np.float64)
    centroids /= np.linalg.norm(centroids, axis=1, keepdims=True)
    attrs = centroids[gu] + attr_noise_sigma * rng.standard_normal((n_u, attr_dim))
    g = from_edges(n_u, n_v, rows, cols, None, attrs_u=attrs)
    return g, gu.astype(np.int64)
