"""Parallel construction of higher-order line graphs of hypergraphs and their s-metrics."""

from .errors import ConfigError, ConvergenceError, DuplicateIncidenceError, ParseError, ResourceLimitError
from .hypergraph import (
    Hypergraph,
    RelabelOrder,
    adj,
    dual,
    inc,
    relabel_by_degree,
    remove_isolated,
    simplify,
    toplexes,
)
from .idmap import IdMap
from .generate import generate_synthetic
from .io import load_hypergraph
from .linegraph import (
    LineGraph,
    PartitionStrategy,
    WorkloadStats,
    instrument,
    sclique_graph,
    slinegraph_ensemble,
    slinegraph_hashmap,
    slinegraph_intersection,
    slinegraph_naive,
    slinegraph_spgemm,
    squeeze,
)
from .pipeline import PipelineConfig, PipelineResult, TimingReport, run_pipeline

__version__ = "0.1.0"
