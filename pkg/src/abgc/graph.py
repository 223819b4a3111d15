"""Attributed bipartite graph data model, file ingestion and normalized adjacency."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np
import scipy.sparse as sp

PathLike = Union[str, Path]


class GraphError(ValueError):
    """Base class for ingestion failures."""


class ParseError(GraphError):
    def __init__(self, message: str, line: Optional[int] = None, path: Optional[PathLike] = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


class BoundsError(ParseError):
    """Node index outside the declared range."""


class DomainError(ParseError):
    """Value outside its admissible domain (e.g. a negative weight)."""


@dataclass(frozen=True)
class BipartiteGraph:
    """Weighted edges between U (the side being clustered) and V.

    ``rows``/``cols``/``weights`` hold the deduplicated edge list in
    row-major order; ``attrs_u`` is required, ``attrs_v`` optional.
    """

    n_u: int
    n_v: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray
    attrs_u: np.ndarray
    attrs_v: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.attrs_u.shape[0] != self.n_u:
            raise GraphError(
                f"attrs_u has {self.attrs_u.shape[0]} rows, expected n_u={self.n_u}"
            )
        if self.attrs_v is not None and self.attrs_v.shape[0] != self.n_v:
            raise GraphError(
                f"attrs_v has {self.attrs_v.shape[0]} rows, expected n_v={self.n_v}"
            )
        for arr in (self.rows, self.cols, self.weights, self.attrs_u):
            arr.setflags(write=False)
        if self.attrs_v is not None:
            self.attrs_v.setflags(write=False)

    @property
    def n_edges(self) -> int:
        return int(self.weights.shape[0])

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.weights.tolist()))

    def adjacency(self) -> sp.csr_matrix:
        """The n_u x n_v weighted biadjacency matrix B_U."""
        return sp.csr_matrix(
            (self.weights, (self.rows, self.cols)), shape=(self.n_u, self.n_v)
        )

    def swapped(self) -> "BipartiteGraph":
        """Same graph with the roles of U and V exchanged."""
        if self.attrs_v is None:
            raise GraphError("clustering the V side requires V attributes")
        return from_edges(
            self.n_v, self.n_u, self.cols, self.rows, self.weights,
            attrs_u=self.attrs_v, attrs_v=self.attrs_u,
        )


def from_edges(
    n_u: int,
    n_v: int,
    rows: Iterable[int],
    cols: Iterable[int],
    weights: Optional[Iterable[float]] = None,
    attrs_u: Optional[np.ndarray] = None,
    attrs_v: Optional[np.ndarray] = None,
) -> BipartiteGraph:
    """Build a graph from raw edge arrays, merging duplicates by summation.

    Zero-weight edges are dropped. When ``attrs_u`` is omitted a single
    all-ones attribute column is used.
    """
    rows = np.asarray(rows, dtype=np.int64).ravel()
    cols = np.asarray(cols, dtype=np.int64).ravel()
    if weights is None:
        weights = np.ones(rows.shape[0], dtype=np.float64)
    else:
        weights = np.asarray(weights, dtype=np.float64).ravel()
    if not (rows.shape == cols.shape == weights.shape):
        raise GraphError("rows, cols and weights must have equal length")
    if rows.size:
        if rows.min() < 0 or rows.max() >= n_u:
            raise BoundsError(f"u index out of range [0, {n_u})")
        if cols.min() < 0 or cols.max() >= n_v:
            raise BoundsError(f"v index out of range [0, {n_v})")
    if not np.all(np.isfinite(weights)):
        raise DomainError("edge weights must be finite")
    if np.any(weights < 0):
        raise DomainError("edge weights must be nonnegative")

    b = sp.coo_matrix((weights, (rows, cols)), shape=(n_u, n_v)).tocsr()
    b.sum_duplicates()
    b.eliminate_zeros()
    b.sort_indices()
    coo = b.tocoo()

    if attrs_u is None:
        attrs_u = np.ones((n_u, 1))
    attrs_u = np.array(attrs_u, dtype=np.float64, copy=True)
    if attrs_v is not None:
        attrs_v = np.array(attrs_v, dtype=np.float64, copy=True)
    return BipartiteGraph(
        n_u=int(n_u),
        n_v=int(n_v),
        rows=coo.row.astype(np.int64),
        cols=coo.col.astype(np.int64),
        weights=coo.data.astype(np.float64),
        attrs_u=attrs_u,
        attrs_v=attrs_v,
    )


def _content_lines(path: PathLike):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if line:
                yield lineno, line


def read_edges(path: PathLike) -> tuple[int, int, np.ndarray, np.ndarray, np.ndarray]:
    """Parse an edge file into ``(n_u, n_v, rows, cols, weights)``."""
    rows, cols, weights = [], [], []
    declared = None
    for lineno, line in _content_lines(path):
        if line.startswith("#"):
            parts = line[1:].split()
            if parts and parts[0] == "abg":
                if declared is not None or rows:
                    raise ParseError("#abg header must come first", lineno, path)
                try:
                    declared = (int(parts[1]), int(parts[2]))
                except (IndexError, ValueError):
                    raise ParseError("malformed #abg header", lineno, path) from None
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 2 or 3 fields, got {len(parts)}", lineno, path)
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise ParseError(f"cannot parse edge {line!r}", lineno, path) from None
        if u < 0 or v < 0:
            raise BoundsError("negative node index", lineno, path)
        if declared is not None and (u >= declared[0] or v >= declared[1]):
            raise BoundsError(
                f"edge ({u}, {v}) outside declared sizes {declared}", lineno, path
            )
        if not np.isfinite(w):
            raise DomainError(f"non-finite weight {w}", lineno, path)
        if w < 0:
            raise DomainError(f"negative weight {w}", lineno, path)
        rows.append(u)
        cols.append(v)
        weights.append(w)
    if declared is not None:
        n_u, n_v = declared
    else:
        n_u = max(rows) + 1 if rows else 0
        n_v = max(cols) + 1 if cols else 0
    return (
        n_u,
        n_v,
        np.asarray(rows, dtype=np.int64),
        np.asarray(cols, dtype=np.int64),
        np.asarray(weights, dtype=np.float64),
    )


def read_attributes(path: PathLike) -> np.ndarray:
    """Parse a ``#dense`` or ``#coo`` attribute file into a dense matrix."""
    lines = _content_lines(path)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty attribute file", None, path) from None
    parts = header.lstrip("#").split()
    if not header.startswith("#") or len(parts) != 3 or parts[0] not in ("dense", "coo"):
        raise ParseError("expected '#dense <rows> <cols>' or '#coo <rows> <cols>'", lineno, path)
    kind = parts[0]
    try:
        n_rows, n_cols = int(parts[1]), int(parts[2])
    except ValueError:
        raise ParseError("malformed attribute header", lineno, path) from None
    out = np.zeros((n_rows, n_cols))

    if kind == "dense":
        i = 0
        for lineno, line in lines:
            if line.startswith("#"):
                continue
            if i >= n_rows:
                raise BoundsError(f"more than {n_rows} rows", lineno, path)
            try:
                vals = [float(t) for t in line.split()]
            except ValueError:
                raise ParseError(f"cannot parse row {line!r}", lineno, path) from None
            if len(vals) != n_cols:
                raise ParseError(f"expected {n_cols} values, got {len(vals)}", lineno, path)
            out[i] = vals
            i += 1
        if i != n_rows:
            raise ParseError(f"expected {n_rows} rows, got {i}", None, path)
    else:
        for lineno, line in lines:
            if line.startswith("#"):
                continue
            toks = line.split()
            if len(toks) != 3:
                raise ParseError("expected 'row col value'", lineno, path)
            try:
                r, c, val = int(toks[0]), int(toks[1]), float(toks[2])
            except ValueError:
                raise ParseError(f"cannot parse triple {line!r}", lineno, path) from None
            if not (0 <= r < n_rows and 0 <= c < n_cols):
                raise BoundsError(f"entry ({r}, {c}) outside {n_rows}x{n_cols}", lineno, path)
            out[r, c] += val
    if not np.all(np.isfinite(out)):
        raise DomainError("attribute values must be finite", None, path)
    return out


def read_labels(path: PathLike) -> np.ndarray:
    labels = []
    for lineno, line in _content_lines(path):
        if line.startswith("#"):
            continue
        try:
            labels.append(int(line))
        except ValueError:
            raise ParseError(f"cannot parse label {line!r}", lineno, path) from None
    return np.asarray(labels, dtype=np.int64)


def write_edges(path: PathLike, g: BipartiteGraph) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#abg {g.n_u} {g.n_v}\n")
        for u, v, w in zip(g.rows.tolist(), g.cols.tolist(), g.weights.tolist()):
            fh.write(f"{u}\t{v}\t{w!r}\n")


def write_attributes(path: PathLike, x: np.ndarray) -> None:
    x = np.asarray(x, dtype=np.float64)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#dense {x.shape[0]} {x.shape[1]}\n")
        for row in x:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def write_labels(path: PathLike, labels: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for lab in np.asarray(labels).tolist():
            fh.write(f"{int(lab)}\n")


def ingest_graph(
    edges_source: PathLike,
    attrs_u_source: PathLike,
    attrs_v_source: Optional[PathLike] = None,
    target_side: str = "U",
) -> BipartiteGraph:
    """Read edge and attribute files; with ``target_side='V'`` the roles swap
    so that downstream code always clusters the stored U side."""
    side = target_side.upper()
    if side not in ("U", "V"):
        raise ValueError(f"target_side must be 'U' or 'V', got {target_side!r}")
    n_u, n_v, rows, cols, weights = read_edges(edges_source)
    attrs_u = read_attributes(attrs_u_source)
    attrs_v = read_attributes(attrs_v_source) if attrs_v_source is not None else None
    # without a header, isolated trailing nodes are only visible through the attributes
    n_u = max(n_u, attrs_u.shape[0])
    if attrs_v is not None:
        n_v = max(n_v, attrs_v.shape[0])
    g = from_edges(n_u, n_v, rows, cols, weights, attrs_u=attrs_u, attrs_v=attrs_v)
    return g.swapped() if side == "V" else g


def compute_degrees(g: BipartiteGraph) -> tuple[np.ndarray, np.ndarray]:
    """Weighted degrees ``(D_U, D_V)``."""
    d_u = np.bincount(g.rows, weights=g.weights, minlength=g.n_u).astype(np.float64)
    d_v = np.bincount(g.cols, weights=g.weights, minlength=g.n_v).astype(np.float64)
    return d_u, d_v


def _inv_sqrt(deg: np.ndarray) -> np.ndarray:
    out = np.zeros_like(deg)
    nz = deg > 0
    out[nz] = 1.0 / np.sqrt(deg[nz])
    return out


def build_normalized_adjacency(g: BipartiteGraph) -> sp.csr_matrix:
    """L_U = D_U^{-1/2} B_U D_V^{-1/2} in CSR form; isolated nodes scale by 0."""
    d_u, d_v = compute_degrees(g)
    vals = g.weights * _inv_sqrt(d_u)[g.rows] * _inv_sqrt(d_v)[g.cols]
    l = sp.csr_matrix((vals, (g.rows, g.cols)), shape=(g.n_u, g.n_v))
    l.sort_indices()
    return l
