"""s-line graph construction.

All builders return a :class:`LineGraph` in the hypergraph's own edge-ID space
whose node set is ``E_s = {e : |e| >= s}``. Parallel builders split the outer loop
over source hyperedges according to a :class:`PartitionStrategy`; each worker
owns its accumulator and output buffer and the buffers are merged and
canonicalised once at the end, so the output does not depend on worker count or
partitioning.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.sparse as sp

from ..errors import ResourceLimitError
from ..hypergraph import Hypergraph, dual
from ..idmap import IdMap
from . import kernels
from .graph import LineGraph, WorkloadStats, canonical_edges
from .partition import PartitionStrategy

DEFAULT_SPGEMM_CAP = 8 * 2**30
_SPGEMM_BYTES_PER_ENTRY = 16  # int64 column + int64 value


def _check_s(s) -> int:
    if int(s) != s or s < 1:
        raise ValueError(f"s must be an integer >= 1, got {s!r}")
    return int(s)


def _triangle(triangle: str) -> bool:
    if triangle not in ("upper", "lower"):
        raise ValueError("triangle must be 'upper' or 'lower'")
    return triangle == "upper"


def _members(h: Hypergraph, s: int) -> np.ndarray:
    return np.flatnonzero(h.edge_sizes >= s).astype(np.int64)


def _arrays(h: Hypergraph):
    return h.edge_ptr, h.edge_idx, h.vertex_ptr, h.vertex_idx


def _run_workers(task, assignment: list[np.ndarray]):
    """Run ``task(sources)`` once per worker, concurrently when there is more than one."""
    if len(assignment) == 1:
        return [task(assignment[0])]
    with ThreadPoolExecutor(max_workers=len(assignment)) as pool:
        return list(pool.map(task, assignment))


def _finish(h, s, part_name, results, n_workers) -> LineGraph:
    us = [r[0] for r in results]
    vs = [r[1] for r in results]
    counters = np.stack([r[-1] for r in results]) if results else np.zeros((0, kernels.N_COUNTERS), np.int64)
    edges = canonical_edges(np.concatenate(us) if us else [], np.concatenate(vs) if vs else [])
    stats = WorkloadStats(part_name, n_workers, counters)
    return LineGraph(s, edges, _members(h, s), IdMap.identity(h.num_edges), stats)


def _plan(h: Hypergraph, part, workers):
    part = part or PartitionStrategy()
    if workers < 1:
        raise ValueError("workers must be >= 1")
    return part, part.assign(h.num_edges, workers)


def slinegraph_naive(h: Hypergraph, s: int, *, sources=None) -> LineGraph:
    """Reference construction: intersect every pair of hyperedges.

    Quadratic in the number of edges; meant as a test oracle on small inputs.
    ``sources`` restricts the outer loop (used to time a subsample).
    """
    s = _check_s(s)
    src = np.arange(h.num_edges, dtype=np.int64) if sources is None else np.asarray(sources, np.int64)
    result = kernels.naive_kernel(src, h.edge_ptr, h.edge_idx, s)
    return _finish(h, s, "serial", [result], 1)


def slinegraph_intersection(h: Hypergraph, s: int, part: PartitionStrategy | None = None,
                            prune: bool = True, *, workers: int = 1,
                            triangle: str = "upper") -> LineGraph:
    """Wedge-driven construction with short-circuited set intersections (the prior heuristic).

    Candidate pairs come from shared vertices only, each pair is considered once
    (``i < j`` for the upper triangle), repeated candidates of one source edge are
    skipped, and each intersection stops as soon as ``s`` is reached or cannot be.
    """
    s = _check_s(s)
    upper = _triangle(triangle)
    part, assignment = _plan(h, part, workers)
    e_ptr, e_idx, v_ptr, v_idx = _arrays(h)

    def task(src):
        return kernels.intersection_kernel(src, e_ptr, e_idx, v_ptr, v_idx, s, prune, upper)

    return _finish(h, s, part.kind, _run_workers(task, assignment), workers)


TLS_MODES = ("per-iteration", "preallocated")


def slinegraph_hashmap(h: Hypergraph, s: int, part: PartitionStrategy | None = None,
                       prune: bool = True, tls: str = "per-iteration", *, workers: int = 1,
                       triangle: str = "upper") -> LineGraph:
    """Overlap-counting construction: no set intersections at all.

    For every source edge ``e_i`` each wedge ``(e_i, v_k, e_j)`` increments a
    hashmap entry for ``e_j``; entries reaching ``s`` become line-graph edges.
    ``tls='preallocated'`` reuses one accumulator per worker, clearing only the
    touched slots, instead of allocating a fresh one per source edge.
    """
    s = _check_s(s)
    if tls not in TLS_MODES:
        raise ValueError(f"tls must be one of {TLS_MODES}")
    upper = _triangle(triangle)
    part, assignment = _plan(h, part, workers)
    e_ptr, e_idx, v_ptr, v_idx = _arrays(h)
    prealloc = tls == "preallocated"

    def task(src):
        return kernels.hashmap_kernel(src, e_ptr, e_idx, v_ptr, v_idx, s, prune, upper, prealloc)

    return _finish(h, s, part.kind, _run_workers(task, assignment), workers)


def slinegraph_ensemble(h: Hypergraph, s_list, part: PartitionStrategy | None = None,
                        prune: bool = True, *, workers: int = 1,
                        triangle: str = "upper") -> list[LineGraph]:
    """Build L_s for every s in ``s_list`` from a single counting pass.

    The counting pass stores ``inc(e_i, e_j)`` for every pair sharing at least one
    vertex (pruned by the smallest s), so memory grows with the number of
    1-overlapping pairs. That can be orders of magnitude more than one single-s
    run needs; prefer :func:`slinegraph_hashmap` per s on large inputs.
    """
    s_list = [int(x) for x in s_list]
    if not s_list:
        raise ValueError("s_list must not be empty")
    for x in s_list:
        _check_s(x)
    if any(b <= a for a, b in zip(s_list, s_list[1:])):
        raise ValueError("s_list must be strictly ascending")
    upper = _triangle(triangle)
    part, assignment = _plan(h, part, workers)
    e_ptr, e_idx, v_ptr, v_idx = _arrays(h)
    s_min = s_list[0]

    def task(src):
        return kernels.ensemble_count_kernel(src, e_ptr, e_idx, v_ptr, v_idx, s_min, prune, upper)

    results = _run_workers(task, assignment)
    u = np.concatenate([r[0] for r in results])
    v = np.concatenate([r[1] for r in results])
    c = np.concatenate([r[2] for r in results])
    counters = np.stack([r[3] for r in results])

    graphs = []
    for s in s_list:
        keep = c >= s
        per_worker = counters.copy()
        stats = WorkloadStats(part.kind, workers, per_worker)
        graphs.append(LineGraph(s, canonical_edges(u[keep], v[keep]), _members(h, s),
                                IdMap.identity(h.num_edges), stats))
    return graphs


def spgemm_memory_estimate(h: Hypergraph) -> int:
    """Upper bound in bytes of the materialised upper triangle of H^T H."""
    flops = kernels.spgemm_upper_flops(*_arrays(h))
    return int(flops) * _SPGEMM_BYTES_PER_ENTRY


def _spgemm_rows(h: Hypergraph, memory_cap, part, workers):
    if memory_cap is not None:
        estimate = spgemm_memory_estimate(h)
        if estimate > memory_cap:
            raise ResourceLimitError(
                f"SpGEMM product estimate {estimate} B exceeds cap {memory_cap} B",
                estimate=estimate, cap=memory_cap)
    part, assignment = _plan(h, part, workers)
    e_ptr, e_idx, v_ptr, v_idx = _arrays(h)

    def task(rows):
        return (rows,) + tuple(kernels.spgemm_upper_kernel(rows, e_ptr, e_idx, v_ptr, v_idx))

    return part, _run_workers(task, assignment)


def overlap_matrix_upper(h: Hypergraph, *, memory_cap=DEFAULT_SPGEMM_CAP) -> sp.csr_matrix:
    """Upper triangle (diagonal included) of L = H^T H as a sparse m x m matrix.

    ``L[i, j] = inc(e_i, e_j)`` and ``L[i, i] = |e_i|``.
    """
    _, results = _spgemm_rows(h, memory_cap, None, 1)
    rows, lengths, cols, data, _ = results[0]
    row_idx = np.repeat(rows, lengths)
    return sp.csr_matrix((data, (row_idx, cols)), shape=(h.num_edges, h.num_edges))


def slinegraph_spgemm(h: Hypergraph, s: int, *, memory_cap=DEFAULT_SPGEMM_CAP,
                      part: PartitionStrategy | None = None, workers: int = 1) -> LineGraph:
    """Baseline: materialise the upper triangle of H^T H, then filter entries >= s.

    No degree-based pruning; the full product is built before filtering. Raises
    :class:`ResourceLimitError` when the product estimate exceeds ``memory_cap``
    bytes (``None`` disables the check).
    """
    s = _check_s(s)
    part, results = _spgemm_rows(h, memory_cap, part, workers)
    filtered = []
    for rows, lengths, cols, data, counters in results:
        u, v = kernels.filter_upper(rows, lengths, cols, data, s)
        filtered.append((u, v, counters))
    return _finish(h, s, part.kind, filtered, workers)


def sclique_graph(h: Hypergraph, s: int, part: PartitionStrategy | None = None,
                  prune: bool = True, **kwargs) -> LineGraph:
    """s-clique graph: vertices linked when they share at least ``s`` hyperedges.

    Computed as the s-line graph of the dual; node IDs are vertex IDs of ``h``.
    At s=1 this is the clique expansion (2-section).
    """
    return slinegraph_hashmap(dual(h), s, part, prune, **kwargs)


def instrument(build, *args, **kwargs) -> tuple[LineGraph, WorkloadStats]:
    """Run a construction function and return its result with the workload counters."""
    result = build(*args, **kwargs)
    stats = result[0].stats if isinstance(result, list) else result.stats
    return result, stats


ALGORITHMS = {
    "naive": slinegraph_naive,
    "intersection": slinegraph_intersection,
    "hashmap": slinegraph_hashmap,
    "spgemm": slinegraph_spgemm,
}
