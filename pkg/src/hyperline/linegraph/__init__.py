"""s-line graph construction and ID squeezing."""

from .build import (
    ALGORITHMS,
    DEFAULT_SPGEMM_CAP,
    instrument,
    overlap_matrix_upper,
    sclique_graph,
    slinegraph_ensemble,
    slinegraph_hashmap,
    slinegraph_intersection,
    slinegraph_naive,
    slinegraph_spgemm,
    spgemm_memory_estimate,
)
from .graph import LineGraph, WorkloadStats, canonical_edges, squeeze, squeeze_graph
from .partition import PartitionStrategy, parse_partition

__all__ = [
    "ALGORITHMS",
    "DEFAULT_SPGEMM_CAP",
    "LineGraph",
    "PartitionStrategy",
    "WorkloadStats",
    "canonical_edges",
    "instrument",
    "overlap_matrix_upper",
    "parse_partition",
    "sclique_graph",
    "slinegraph_ensemble",
    "slinegraph_hashmap",
    "slinegraph_intersection",
    "slinegraph_naive",
    "slinegraph_spgemm",
    "spgemm_memory_estimate",
    "squeeze",
    "squeeze_graph",
]
