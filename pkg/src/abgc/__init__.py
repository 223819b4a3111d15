"""Clustering the target side of attributed bipartite graphs.

Three phases: smoothed-feature random-feature embedding, orthogonal NMF,
and rounding to a normalized cluster indicator.
"""

from .graph import BipartiteGraph, build_normalized_adjacency, compute_degrees, from_edges, ingest_graph
from .pipeline import ClusterResult, PipelineConfig, cluster_graph, run_pipeline

__all__ = [
    "BipartiteGraph",
    "ClusterResult",
    "PipelineConfig",
    "build_normalized_adjacency",
    "cluster_graph",
    "compute_degrees",
    "from_edges",
    "ingest_graph",
    "run_pipeline",
]
__version__ = "0.1.0"
