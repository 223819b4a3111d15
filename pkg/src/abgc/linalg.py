"""Seed-driven dense/sparse kernels shared by every phase.

Dense matrices are plain float64 ``numpy`` arrays and sparse matrices are
``scipy.sparse.csr_matrix`` with sorted, duplicate-free column indices.
Every randomized routine takes an integer seed and builds its own
``numpy.random.Generator`` from it, so equal seeds give bitwise-equal output.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

# rows whose norm is already this close to 1 are left untouched, which makes
# normalization idempotent bit for bit
_UNIT_TOL = 1e-13


def spmm(s: sp.spmatrix, d: np.ndarray, transpose_sparse: bool = False) -> np.ndarray:
    """Sparse x dense product ``s @ d`` (or ``s.T @ d``).

    The transpose is taken as a CSC view of the same buffers, never copied.
    """
    s = sp.csr_matrix(s)
    d = np.asarray(d, dtype=np.float64)
    squeeze = d.ndim == 1
    if squeeze:
        d = d[:, None]
    inner = s.shape[0] if transpose_sparse else s.shape[1]
    if d.shape[0] != inner:
        op = "s.T @ d" if transpose_sparse else "s @ d"
        raise ValueError(f"dimension mismatch in {op}: {s.shape} vs {d.shape}")
    out = (s.T @ d) if transpose_sparse else (s @ d)
    out = np.ascontiguousarray(out, dtype=np.float64)
    return out[:, 0] if squeeze else out


def haar_orthogonal(dim: int, seed: int) -> np.ndarray:
    """A ``dim x dim`` orthogonal matrix drawn from the Haar measure.

    QR of a standard-normal matrix, with each column of Q multiplied by the
    sign of the matching diagonal entry of R.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def randomized_truncated_svd(
    m,
    k: int,
    oversample: int = 10,
    power_iters: int = 2,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Top-``k`` SVD by randomized range finding with subspace iteration.

    Returns ``(U, s, V)`` with ``U`` n x k, ``s`` nonincreasing length k and
    ``V`` cols x k, so that ``m ~= U @ diag(s) @ V.T``. ``m`` may be dense or
    sparse.
    """
    n_rows, n_cols = m.shape
    if not 1 <= k <= min(n_rows, n_cols):
        raise ValueError(f"k={k} out of range [1, {min(n_rows, n_cols)}]")
    if sp.issparse(m):
        m = sp.csr_matrix(m, dtype=np.float64)
    else:
        m = np.asarray(m, dtype=np.float64)
    width = min(k + oversample, n_rows, n_cols)
    rng = np.random.default_rng(seed)
    omega = rng.standard_normal((n_cols, width))

    # LU keeps the power iterations well scaled at a fraction of the cost of
    # QR on tall matrices; one QR at the end yields the orthonormal basis
    q = np.asarray(m @ omega)
    for _ in range(power_iters):
        q, _ = sla.lu(q, permute_l=True, check_finite=False)
        w, _ = sla.lu(np.asarray(m.T @ q), permute_l=True, check_finite=False)
        q = np.asarray(m @ w)
    q, _ = sla.qr(q, mode="economic", check_finite=False)

    b = np.asarray((m.T @ q).T)
    ub, s, vt = np.linalg.svd(b, full_matrices=False)
    u = q @ ub[:, :k]
    return u, s[:k].copy(), vt[:k].T.copy()


def row_l2_normalize(m: np.ndarray) -> np.ndarray:
    """Scale every nonzero row to unit L2 norm; zero rows stay zero."""
    m = np.asarray(m, dtype=np.float64)
    # pre-scale by the largest entry so tiny or huge rows do not under/overflow
    peak = np.abs(m).max(axis=1, initial=0.0)
    safe = np.where(peak > 0, peak, 1.0)
    norms = peak * np.linalg.norm(m / safe[:, None], axis=1)
    scale = np.ones_like(norms)
    todo = (norms > 0) & (np.abs(norms - 1.0) > _UNIT_TOL)
    scale[todo] = norms[todo]
    return m / scale[:, None]
