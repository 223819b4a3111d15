"""Phase 2: orthogonal nonnegative factorization ``R ~= U H^T`` by multiplicative updates.

``R`` carries sin/cos features and therefore negative entries, so the
numerators of both update rules are clamped at zero. With the clamp the
``H`` step is the exact minimizer of the usual quadratic auxiliary function
over ``H >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import randomized_truncated_svd

EPS = 1e-12


@dataclass
class FactorPair:
    upsilon: np.ndarray  # n x k
    h: np.ndarray  # 2d x k
    loss_history: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class FactorizeConfig:
    k: int
    t_f: int = 5
    epsilon: float = EPS
    seed: int = 42

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.t_f < 0:
            raise ValueError(f"t_f must be >= 0, got {self.t_f}")


def reconstruction_loss(r: np.ndarray, upsilon: np.ndarray, h: np.ndarray) -> float:
    """``||R - U H^T||_F^2`` evaluated without forming ``U H^T``."""
    rh = r @ h
    val = (
        np.vdot(r, r)
        - 2.0 * np.vdot(upsilon, rh)
        + np.vdot(upsilon.T @ upsilon, h.T @ h)
    )
    return float(max(val, 0.0))


def init_factors(r: np.ndarray, k: int, seed: int = 0, epsilon: float = EPS) -> FactorPair:
    """SVD seeding: ``U = max(Gamma, 0) + eps`` and ``H = max(Psi Sigma, 0) + eps``.

    Each singular pair is first flipped so that its left vector has a
    nonnegative column sum.
    """
    n, m = r.shape
    if not 1 <= k <= min(n, m):
        raise ValueError(f"k={k} out of range [1, {min(n, m)}]")
    gamma, sigma, psi = randomized_truncated_svd(r, k, seed=seed)
    signs = np.where(gamma.sum(axis=0) < 0, -1.0, 1.0)
    gamma = gamma * signs
    psi = psi * signs
    upsilon = np.maximum(gamma, 0.0) + epsilon
    h = np.maximum(psi * sigma, 0.0) + epsilon
    return FactorPair(upsilon, h, [reconstruction_loss(r, upsilon, h)])


def update_h(r: np.ndarray, upsilon: np.ndarray, h: np.ndarray, epsilon: float = EPS) -> np.ndarray:
    num = np.maximum(r.T @ upsilon, 0.0)
    den = h @ (upsilon.T @ upsilon) + epsilon
    return h * (num / den)


def update_upsilon(
    r: np.ndarray, upsilon: np.ndarray, h: np.ndarray, epsilon: float = EPS
) -> np.ndarray:
    """Orthogonality-seeking update ``U * sqrt(RH / (U (U^T RH)))``.

    The n x n matrix ``U U^T`` is never formed. That rule does not by itself
    decrease ``||R - U H^T||``; when it would raise the loss the plain
    multiplicative step ``U * RH / (U H^T H)`` is taken instead, which
    minimizes a majorizer of the loss and so never increases it.
    """
    rh = r @ h
    hth = h.T @ h
    num = np.maximum(rh, 0.0)
    cand = upsilon * np.sqrt(num / (upsilon @ (upsilon.T @ num) + epsilon))

    # loss(U) - ||R||^2 = -2 <U, RH> + <U^T U, H^T H>
    def partial_loss(u):
        return -2.0 * np.vdot(u, rh) + np.vdot(u.T @ u, hth)

    if partial_loss(cand) <= partial_loss(upsilon):
        return cand
    return upsilon * (num / (upsilon @ hth + epsilon))


def run_onmf(r: np.ndarray, cfg: FactorizeConfig) -> FactorPair:
    r = np.asarray(r, dtype=np.float64)
    fp = init_factors(r, cfg.k, seed=cfg.seed, epsilon=cfg.epsilon)
    upsilon, h = fp.upsilon, fp.h
    for _ in range(cfg.t_f):
        h = update_h(r, upsilon, h, cfg.epsilon)
        upsilon = update_upsilon(r, upsilon, h, cfg.epsilon)
        fp.loss_history.append(reconstruction_loss(r, upsilon, h))
    fp.upsilon, fp.h = upsilon, h
    return fp
