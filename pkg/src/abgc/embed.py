"""Phase 1: attribute reduction, multi-hop smoothing and the random feature map.

The random feature map linearizes the symmetric-softmax affinity

    s(i, j) = exp(z_i . z_j) / sqrt(sum_l exp(z_i . z_l) * sum_l exp(z_j . z_l))

between unit feature rows, so that ``R @ R.T`` estimates the affinity matrix
without ever forming it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import scipy.sparse as sp

from .linalg import haar_orthogonal, randomized_truncated_svd, row_l2_normalize, spmm

DENOM_FLOOR = 1e-12
PANEL_WIDTH = 32


@dataclass(frozen=True)
class EmbedConfig:
    alpha: float = 0.6
    gamma: int = 5
    reduced_dim: Optional[int] = 64  # None disables reduction
    seed: int = 42

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.reduced_dim is not None and self.reduced_dim < 1:
            raise ValueError(f"reduced_dim must be >= 1 or None, got {self.reduced_dim}")


def reduce_attribute_dim(x: np.ndarray, d: Optional[int], seed: int = 0) -> np.ndarray:
    """Project attributes onto their top-``d`` singular directions (``X' = U S``).

    Pass-through when ``d`` is None or not smaller than the attribute count.
    """
    if d is None or d >= x.shape[1]:
        return x
    if d < 1:
        raise ValueError("d must be >= 1")
    u, s, _ = randomized_truncated_svd(x, min(d, x.shape[0]), seed=seed)
    out = u * s
    if out.shape[1] < d:
        # fewer nodes than requested dimensions: pad with zero columns
        out = np.hstack([out, np.zeros((x.shape[0], d - out.shape[1]))])
    return out


def smooth_features(
    l: sp.spmatrix,
    x: np.ndarray,
    alpha: float,
    gamma: int,
    scale: Optional[float] = None,
) -> np.ndarray:
    """Unnormalized smoothed features ``scale * sum_{r<=gamma} alpha^r (L L^T)^r X``.

    ``scale`` defaults to ``1 - alpha``. The product with ``L L^T`` is always
    evaluated as ``L @ (L.T @ Z)``.
    """
    x = np.asarray(x, dtype=np.float64)
    if l.shape[0] != x.shape[0]:
        raise ValueError(f"L has {l.shape[0]} rows but X has {x.shape[0]}")
    c = (1.0 - alpha) if scale is None else scale
    out = np.empty_like(x)
    # columns evolve independently; narrow panels keep the gathered rows in cache
    for start in range(0, x.shape[1], PANEL_WIDTH):
        base = c * x[:, start:start + PANEL_WIDTH]
        z = base.copy()
        for _ in range(gamma):
            z = base + alpha * spmm(l, spmm(l, z, transpose_sparse=True))
        out[:, start:start + PANEL_WIDTH] = z
    return out


def compute_smoothed_features(
    l: sp.spmatrix, x: np.ndarray, cfg: EmbedConfig
) -> np.ndarray:
    """Row-normalized smoothed features (the matrix Z-hat)."""
    return row_l2_normalize(smooth_features(l, x, cfg.alpha, cfg.gamma))


def build_random_feature_map(
    zhat: np.ndarray, seed: int, return_parts: bool = False
) -> Union[np.ndarray, tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Orthogonal random sin/cos features whose Gram matrix estimates the affinity.

    With ``return_parts`` also returns the unnormalized features ``R'`` and
    their column sum ``r``.
    """
    zhat = np.asarray(zhat, dtype=np.float64)
    d = zhat.shape[1]
    q = haar_orthogonal(d, seed)
    rotated = np.sqrt(d) * (zhat @ q.T)
    r_prime = np.sqrt(np.e / d) * np.hstack([np.sin(rotated), np.cos(rotated)])
    total = r_prime.sum(axis=0)
    denom = np.maximum(r_prime @ total, DENOM_FLOOR)
    r = r_prime / np.sqrt(denom)[:, None]
    if return_parts:
        return r, r_prime, total
    return r
