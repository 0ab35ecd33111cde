"""End-to-end orchestration with per-stage timing.

Stages run in order: preprocessing (isolated-element removal, optional toplex
simplification, relabel-by-degree), s-line graph construction, mapping back to
input IDs with optional ID squeezing, then metrics.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import metrics as M
from .errors import ConfigError
from .hypergraph import Hypergraph, dual, relabel_by_degree, remove_isolated, simplify
from .io import load_hypergraph, write_edge_list, write_idmap
from .linegraph import (
    LineGraph,
    parse_partition,
    slinegraph_ensemble,
    slinegraph_hashmap,
    slinegraph_intersection,
    slinegraph_naive,
    slinegraph_spgemm,
    squeeze_graph,
)
from .linegraph.build import DEFAULT_SPGEMM_CAP

log = logging.getLogger(__name__)

ALGORITHMS = ("naive", "intersection", "hashmap", "ensemble", "spgemm", "sclique")
METRICS = ("cc", "bc", "ac", "pr", "dist")
_ALGO_ALIASES = {"intersect": "intersection", "1": "intersection", "2": "hashmap", "map": "hashmap"}


@dataclass
class PipelineConfig:
    input: str | Path | None = None
    format: str = "tsv"
    s: int | None = None
    s_list: list[int] | None = None
    algorithm: str = "hashmap"
    partition: str = "blocked"
    chunk: int = 64
    relabel: str = "asc"
    triangle: str = "upper"
    prune: bool = True
    squeeze: bool = False
    toplex: bool = False
    workers: int = 1
    tls: str = "per-iteration"
    metrics: tuple[str, ...] = ()
    out_dir: str | Path | None = None
    timing_json: str | Path | None = None
    seed: int = 0
    spgemm_cap: int | None = DEFAULT_SPGEMM_CAP
    normalized_bc: bool = False
    damping: float = 0.85
    dist_source: int | None = None
    hypergraph: Hypergraph | None = field(default=None, repr=False)

    def validate(self) -> None:
        self.algorithm = _ALGO_ALIASES.get(self.algorithm, self.algorithm)
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.algorithm == "ensemble":
            if not self.s_list:
                raise ConfigError("the ensemble algorithm requires s_list")
            if self.s is not None:
                raise ConfigError("give either s or s_list, not both")
        else:
            if self.s_list:
                raise ConfigError("s_list is only valid with the ensemble algorithm")
            if self.s is None:
                raise ConfigError(f"algorithm {self.algorithm!r} requires s")
        for s in self.s_values:
            if int(s) != s or s < 1:
                raise ConfigError(f"s values must be integers >= 1, got {s!r}")
        if list(self.s_values) != sorted(set(self.s_values)):
            raise ConfigError("s_list must be strictly ascending")
        if self.workers < 1:
            raise ConfigError("worker count must be >= 1")
        if self.relabel not in ("none", "asc", "desc"):
            raise ConfigError(f"unknown relabel order {self.relabel!r}")
        if self.triangle not in ("upper", "lower"):
            raise ConfigError(f"unknown triangle {self.triangle!r}")
        unknown = set(self.metrics) - set(METRICS)
        if unknown:
            raise ConfigError(f"unknown metrics {sorted(unknown)}")
        try:
            parse_partition(self.partition, self.chunk)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.input is None and self.hypergraph is None:
            raise ConfigError("no input given")

    @property
    def s_values(self) -> list[int]:
        return list(self.s_list) if self.s_list else ([self.s] if self.s is not None else [])


@dataclass
class TimingReport:
    load: float = 0.0
    preprocessing: float = 0.0
    s_overlap: float = 0.0
    squeeze: float = 0.0
    metrics: float = 0.0
    total: float = 0.0
    set_intersections: int = 0
    worker_visits: list[int] = field(default_factory=list)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class PipelineResult:
    linegraphs: dict[int, LineGraph]
    metrics: dict
    timing: TimingReport
    labels: np.ndarray | None = field(default=None, repr=False)

    def label(self, ids):
        ids = np.asarray(ids)
        return ids if self.labels is None else self.labels[ids]


class _Clock:
    def __init__(self):
        self.start = time.perf_counter()

    def lap(self) -> float:
        now = time.perf_counter()
        elapsed, self.start = now - self.start, now
        return elapsed


def _construct(cfg: PipelineConfig, h: Hypergraph) -> list[LineGraph]:
    part = parse_partition(cfg.partition, cfg.chunk)
    algo = cfg.algorithm
    if algo == "ensemble":
        return slinegraph_ensemble(h, cfg.s_list, part, cfg.prune, workers=cfg.workers,
                                   triangle=cfg.triangle)
    s = cfg.s
    if algo in ("hashmap", "sclique"):
        g = slinegraph_hashmap(h, s, part, cfg.prune, cfg.tls, workers=cfg.workers, triangle=cfg.triangle)
    elif algo == "intersection":
        g = slinegraph_intersection(h, s, part, cfg.prune, workers=cfg.workers, triangle=cfg.triangle)
    elif algo == "spgemm":
        g = slinegraph_spgemm(h, s, memory_cap=cfg.spgemm_cap, part=part, workers=cfg.workers)
    else:
        g = slinegraph_naive(h, s)
    return [g]


def _json_key(x):
    return x.item() if hasattr(x, "item") else x


def _compute_metrics(cfg: PipelineConfig, g: LineGraph, labels) -> dict:
    """Metric values for one line graph, keyed by original node label."""
    node_labels = [_json_key(x) for x in labels[g.original_nodes()]] if g.num_nodes else []
    out = {}
    if "cc" in cfg.metrics:
        comp = M.s_connected_components(g, include_singletons=True)
        comp_labels = labels[g.id_map.to_original(comp.labels)] if g.num_nodes else []
        out["cc"] = {
            "components": [[_json_key(x) for x in labels[g.id_map.to_original(c)]]
                           for c in comp.components],
            "values": dict(zip(node_labels, [_json_key(x) for x in comp_labels])),
        }
    if "bc" in cfg.metrics:
        bc = M.s_betweenness(g, normalized=cfg.normalized_bc, workers=cfg.workers)
        out["bc"] = {"values": dict(zip(node_labels, bc.tolist()))}
    if "pr" in cfg.metrics:
        pr = M.pagerank(g, damping=cfg.damping)
        out["pr"] = {"values": dict(zip(node_labels, pr.tolist()))}
    if "ac" in cfg.metrics:
        comp = M.s_connected_components(g, include_singletons=False)
        per_comp = M.algebraic_connectivity_by_component(g, comp)
        values = {}
        components = {}
        for root, res in per_comp.items():
            key = _json_key(labels[g.id_map.to_original(root)])
            components[str(key)] = {"lambda2": res.lambda2, "residual": res.residual,
                                    "iterations": res.iterations, "method": res.method}
        for node, root in zip(node_labels, comp.labels.tolist()):
            if root in per_comp:
                values[node] = per_comp[root].lambda2
        out["ac"] = {"components": components, "values": values}
    if "dist" in cfg.metrics and g.num_nodes:
        src = g.nodes[0] if cfg.dist_source is None else _find_source(g, labels, cfg.dist_source)
        d = M.bfs_distances(g, src)
        out["dist"] = {"source": _json_key(labels[g.id_map.to_original(src)]),
                       "values": {n: int(x) for n, x in zip(node_labels, d.tolist()) if x >= 0}}
    return out


def _find_source(g: LineGraph, labels, wanted) -> int:
    originals = labels[g.original_nodes()]
    hits = np.flatnonzero(originals == wanted)
    if hits.size == 0:
        raise ConfigError(f"distance source {wanted!r} is not a node of the s={g.s} line graph")
    return int(g.nodes[hits[0]])


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    """Run every enabled stage in order and write any requested artifacts."""
    cfg.validate()
    timing = TimingReport()
    wall = _Clock()
    clock = _Clock()

    h = cfg.hypergraph if cfg.hypergraph is not None else load_hypergraph(cfg.input, cfg.format)
    timing.load = clock.lap()

    # preprocessing; `origin[k]` = input edge ID of working edge k
    work = dual(h) if cfg.algorithm == "sclique" else h
    labels = work.edge_labels if work.edge_labels is not None else np.arange(work.num_edges)
    num_input_ids = work.num_edges
    work, _, emap = remove_isolated(work)
    origin = emap.forward.copy()
    if cfg.toplex:
        work, tmap = simplify(work)
        origin = origin[tmap.forward]
    work, order = relabel_by_degree(work, cfg.relabel)
    origin = origin[order.inverse]
    timing.preprocessing = clock.lap()
    log.info("preprocessed: %r", work)

    graphs = _construct(cfg, work)
    timing.s_overlap = clock.lap()
    for g in graphs:
        if g.stats is not None:
            timing.set_intersections += g.stats.total("set_intersections")
    if graphs and graphs[0].stats is not None:
        timing.worker_visits = graphs[0].stats.visits.tolist()

    # back to input edge IDs, then optionally compact
    mapped = {}
    for g in graphs:
        g_in = g.relabel(origin, num_ids=num_input_ids)
        mapped[g.s] = squeeze_graph(g_in) if cfg.squeeze else g_in
    timing.squeeze = clock.lap()

    results = {}
    if cfg.metrics:
        for s, g in mapped.items():
            for name, value in _compute_metrics(cfg, g, labels).items():
                results.setdefault(name, {})[str(s)] = value
    timing.metrics = clock.lap()
    timing.total = wall.lap()

    if cfg.out_dir is not None:
        write_outputs(cfg, mapped, results, labels)
    if cfg.timing_json is not None or cfg.out_dir is not None:
        path = Path(cfg.timing_json) if cfg.timing_json else Path(cfg.out_dir) / "timing.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(timing.as_dict(), indent=2) + "\n")
    return PipelineResult(mapped, results, timing, labels)


def write_outputs(cfg: PipelineConfig, graphs: dict[int, LineGraph], results: dict, labels) -> None:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for s, g in graphs.items():
        if cfg.squeeze:
            write_edge_list(out / f"linegraph_s{s}.tsv", g.edges, s=s, num_nodes=g.num_nodes)
            write_idmap(out / f"idmap_s{s}.tsv", g.id_map.forward, labels)
        else:
            write_edge_list(out / f"linegraph_s{s}.tsv", labels[g.original_edges()], s=s,
                            num_nodes=g.num_nodes)
    if results:
        (out / "metrics.json").write_text(json.dumps(results, indent=2, sort_keys=True, default=str) + "\n")
        for name, per_s in results.items():
            for s, value in per_s.items():
                with open(out / f"metrics_s{s}_{name}.tsv", "w") as fh:
                    for node, v in value["values"].items():
                        fh.write(f"{node}\t{v}\n")
