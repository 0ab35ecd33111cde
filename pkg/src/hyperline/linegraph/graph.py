from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..idmap import IdMap
from .kernels import COUNTER_FIELDS


def canonical_edges(u, v) -> np.ndarray:
    """Return a (k, 2) int64 array with u < v per row, lexicographically sorted and deduplicated."""
    u = np.asarray(u, dtype=np.int64).reshape(-1)
    v = np.asarray(v, dtype=np.int64).reshape(-1)
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    keep = lo != hi
    lo, hi = lo[keep], hi[keep]
    order = np.lexsort((hi, lo))
    pairs = np.stack([lo[order], hi[order]], axis=1) if lo.size else np.empty((0, 2), np.int64)
    if len(pairs) > 1:
        fresh = np.ones(len(pairs), dtype=bool)
        fresh[1:] = np.any(pairs[1:] != pairs[:-1], axis=1)
        pairs = pairs[fresh]
    return np.ascontiguousarray(pairs)


@dataclass
class WorkloadStats:
    """Per-worker counters collected during a construction run.

    * ``sources``: outer-loop hyperedges processed (after pruning)
    * ``members``: (e_i, v_k) steps of the middle loop
    * ``visits``: hyperedges visited in the innermost loop
    * ``wedges``: distinct candidate pairs examined
    * ``set_intersections``: explicit neighbour-list intersections performed
    * ``emitted``: line-graph edges produced
    """

    partition: str
    workers: int
    counters: np.ndarray  # shape (workers, len(COUNTER_FIELDS))

    def __getattr__(self, name):
        if name in COUNTER_FIELDS:
            return self.counters[:, COUNTER_FIELDS.index(name)]
        raise AttributeError(name)

    def total(self, name: str) -> int:
        return int(getattr(self, name).sum())

    def imbalance(self, name: str = "visits") -> float:
        """max / mean of a per-worker counter; 1.0 is perfect balance."""
        col = getattr(self, name).astype(float)
        mean = col.mean() if col.size else 0.0
        return float(col.max() / mean) if mean > 0 else 1.0

    def as_dict(self) -> dict:
        out = {"partition": self.partition, "workers": self.workers}
        for name in COUNTER_FIELDS:
            out[name] = getattr(self, name).tolist()
        return out


@dataclass(eq=False)
class LineGraph:
    """An s-line graph ``L_s = <E_s, F>``.

    ``edges`` is a (k, 2) array over the graph's ID space with u < v in
    lexicographic order. ``nodes`` lists every node (E_s, including isolated ones)
    in the same ID space. ``id_map`` sends graph IDs to the hyperedge IDs of the
    source hypergraph; it is the identity unless the graph was squeezed.
    """

    s: int
    edges: np.ndarray
    nodes: np.ndarray
    id_map: IdMap
    stats: WorkloadStats | None = field(default=None, repr=False)

    @property
    def num_nodes(self) -> int:
        return int(self.nodes.size)

    @property
    def num_edges(self) -> int:
        return int(len(self.edges))

    def original_edges(self) -> np.ndarray:
        """Edges expressed in hyperedge IDs of the source hypergraph."""
        return self.id_map.to_original(self.edges).reshape(-1, 2)

    def original_nodes(self) -> np.ndarray:
        return self.id_map.to_original(self.nodes)

    def edge_set(self, labels=None) -> set:
        """Set of ``(u, v)`` tuples in original IDs, or in ``labels[id]`` when given."""
        pairs = self.original_edges()
        if labels is not None:
            labels = np.asarray(labels)
            return {(labels[a].item(), labels[b].item()) for a, b in pairs.tolist()}
        return {(a, b) for a, b in pairs.tolist()}

    def node_set(self, labels=None) -> set:
        ids = self.original_nodes()
        if labels is not None:
            return {np.asarray(labels)[i].item() for i in ids.tolist()}
        return set(ids.tolist())

    def same_as(self, other: LineGraph) -> bool:
        """Bit-identical s, node set, edge array and ID map."""
        return (
            self.s == other.s
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.edges, other.edges)
            and self.id_map == other.id_map
        )

    def local_adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        """Undirected CSR (indptr, indices) over positions ``0..num_nodes-1`` of ``nodes``."""
        k = self.num_nodes
        if self.num_edges == 0:
            return np.zeros(k + 1, dtype=np.int64), np.empty(0, dtype=np.int64)
        local = np.searchsorted(self.nodes, self.edges)
        src = np.concatenate([local[:, 0], local[:, 1]])
        dst = np.concatenate([local[:, 1], local[:, 0]])
        order = np.lexsort((dst, src))
        indptr = np.zeros(k + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=k), out=indptr[1:])
        return indptr, np.ascontiguousarray(dst[order])

    def relabel(self, mapping, num_ids=None) -> LineGraph:
        """Move the graph into another ID space via ``mapping[old_id] -> new_id``.

        The ID map is reset to the identity of the new space, so ``mapping`` must
        already account for any squeeze.
        """
        mapping = np.asarray(mapping, dtype=np.int64)
        orig = self.original_edges()
        edges = canonical_edges(mapping[orig[:, 0]], mapping[orig[:, 1]])
        nodes = np.sort(mapping[self.original_nodes()])
        size = int(num_ids) if num_ids is not None else (int(mapping.max()) + 1 if mapping.size else 0)
        return LineGraph(self.s, edges, nodes, IdMap.identity(size), self.stats)


def squeeze(edges, nodes=None, s=None) -> LineGraph:
    """Compact node IDs to ``0..k-1`` in ascending original-ID order.

    ``nodes`` optionally adds IDs that have no incident edge (isolated members of
    E_s); otherwise the node set is the set of edge endpoints.
    """
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    ids = edges.reshape(-1)
    if nodes is not None:
        ids = np.concatenate([ids, np.asarray(nodes, dtype=np.int64).reshape(-1)])
    id_map = IdMap.from_ids(ids)
    compact = np.searchsorted(id_map.forward, edges)
    return LineGraph(s, canonical_edges(compact[:, 0], compact[:, 1]),
                     np.arange(len(id_map), dtype=np.int64), id_map)


def squeeze_graph(g: LineGraph) -> LineGraph:
    """Squeeze an unsqueezed LineGraph, keeping all of its nodes and its stats."""
    out = squeeze(g.original_edges(), g.original_nodes(), g.s)
    out.stats = g.stats
    return out
