"""Phase 3: round the relaxed factor into a normalized cluster indicator (NCI).

Alternates a row-wise argmax assignment against ``U @ Phi`` with the
rotation update ``Phi = U^T Y`` until the labels stop changing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass
class NciMatrix:
    y: np.ndarray
    labels: np.ndarray
    iterations: int = 0
    gap_history: list[float] = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.y.shape[1]


def assign_rows(upsilon: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """One-hot matrix selecting ``argmax_l (U @ Phi)[i, l]`` per row.

    Ties go to the smallest column index.
    """
    scores = upsilon @ phi
    labels = np.argmax(scores, axis=1)
    raw = np.zeros_like(scores)
    raw[np.arange(scores.shape[0]), labels] = 1.0
    return raw


def normalize_columns(raw: np.ndarray) -> NciMatrix:
    """Scale each nonempty column of a one-hot matrix to unit L2 norm."""
    raw = np.asarray(raw, dtype=np.float64)
    counts = np.count_nonzero(raw, axis=0)
    scale = np.zeros(raw.shape[1])
    nz = counts > 0
    scale[nz] = 1.0 / np.sqrt(counts[nz])
    labels = np.argmax(raw != 0, axis=1)
    return NciMatrix(raw * scale, labels)


def update_rotation(upsilon: np.ndarray, y: NciMatrix) -> np.ndarray:
    return upsilon.T @ y.y


def nci_gap(upsilon: np.ndarray, y: np.ndarray, r: np.ndarray) -> float:
    """``|Tr((Y Y^T - U U^T) R R^T)|`` computed through k-column products."""
    ry = r.T @ y
    ru = r.T @ upsilon
    return float(abs(np.vdot(ry, ry) - np.vdot(ru, ru)))


def generate_nci(
    upsilon: np.ndarray, t_g: int = 20, r: Optional[np.ndarray] = None
) -> NciMatrix:
    """Round ``upsilon`` into an NCI matrix in at most ``t_g`` sweeps.

    When ``r`` is given, the reconstruction gap against ``r`` is recorded in
    ``gap_history`` after every sweep.
    """
    if t_g < 1:
        raise ValueError("t_g must be >= 1")
    upsilon = np.asarray(upsilon, dtype=np.float64)
    phi = np.eye(upsilon.shape[1])
    prev = None
    gaps: list[float] = []
    for it in range(1, t_g + 1):
        y = normalize_columns(assign_rows(upsilon, phi))
        if r is not None:
            gaps.append(nci_gap(upsilon, y.y, r))
        if prev is not None and np.array_equal(prev, y.labels):
            break
        prev = y.labels
        phi = update_rotation(upsilon, y)
    y.iterations = it
    y.gap_history = gaps
    return y


def extract_labels(y: NciMatrix) -> np.ndarray:
    return np.argmax(y.y != 0, axis=1).astype(np.int64)
