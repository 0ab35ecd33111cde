"""Immutable hypergraph with CSR adjacency in both directions, plus preprocessing and toplex simplification."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import DuplicateIncidenceError
from .idmap import IdMap


def _csr(rows: np.ndarray, cols: np.ndarray, nrows: int):
    """Build (indptr, indices) with rows grouped and each row's indices sorted."""
    counts = np.bincount(rows, minlength=nrows) if rows.size else np.zeros(nrows, np.int64)
    indptr = np.zeros(nrows + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    if rows.size == 0:
        return indptr, np.empty(0, dtype=np.int64)
    width = int(cols.max()) + 1
    # one sort on a packed (row, col) key is much cheaper than lexsort
    key = np.sort(rows.astype(np.int64) * width + cols)
    return indptr, np.ascontiguousarray(key % width, dtype=np.int64)


def _sort_rows(indptr: np.ndarray, indices: np.ndarray, width: int) -> np.ndarray:
    """Sort every CSR row of ``indices`` (values < width) independently."""
    rows = np.repeat(np.arange(indptr.size - 1, dtype=np.int64), np.diff(indptr))
    return np.ascontiguousarray(np.sort(rows * width + indices) % width)


def _freeze(*arrays):
    for a in arrays:
        if a is not None:
            a.setflags(write=False)


class Hypergraph:
    """A hypergraph ``H = <V, E>`` stored as its Boolean incidence pattern.

    ``edge_ptr/edge_idx`` hold, per hyperedge, its sorted member vertices (rows of
    H transposed); ``vertex_ptr/vertex_idx`` hold, per vertex, its sorted incident
    hyperedges. Both directions are built once and never mutated, so an instance
    can be shared read-only between worker threads.

    Use :meth:`from_incidences` or :meth:`from_edge_lists` rather than the raw
    constructor.
    """

    __slots__ = (
        "num_vertices",
        "num_edges",
        "edge_ptr",
        "edge_idx",
        "vertex_ptr",
        "vertex_idx",
        "edge_labels",
        "vertex_labels",
    )

    def __init__(self, num_vertices, num_edges, edge_ptr, edge_idx, vertex_ptr, vertex_idx,
                 edge_labels=None, vertex_labels=None):
        self.num_vertices = int(num_vertices)
        self.num_edges = int(num_edges)
        self.edge_ptr = edge_ptr
        self.edge_idx = edge_idx
        self.vertex_ptr = vertex_ptr
        self.vertex_idx = vertex_idx
        self.edge_labels = None if edge_labels is None else np.asarray(edge_labels)
        self.vertex_labels = None if vertex_labels is None else np.asarray(vertex_labels)
        _freeze(edge_ptr, edge_idx, vertex_ptr, vertex_idx, self.edge_labels, self.vertex_labels)

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_incidences(cls, edges, vertices, num_edges=None, num_vertices=None,
                        edge_labels=None, vertex_labels=None) -> Hypergraph:
        """Build from parallel arrays of (edge ID, vertex ID) incidences.

        Duplicate pairs raise :class:`DuplicateIncidenceError`; the incidence
        matrix is Boolean so repeated entries are treated as input errors.
        """
        e = np.asarray(edges, dtype=np.int64).reshape(-1)
        v = np.asarray(vertices, dtype=np.int64).reshape(-1)
        if e.shape != v.shape:
            raise ValueError("edges and vertices must have equal length")
        if e.size and (e.min() < 0 or v.min() < 0):
            raise ValueError("IDs must be non-negative")
        m = int(e.max()) + 1 if e.size else 0
        n = int(v.max()) + 1 if v.size else 0
        m = m if num_edges is None else int(num_edges)
        n = n if num_vertices is None else int(num_vertices)
        if e.size and (e.max() >= m or v.max() >= n):
            raise ValueError("incidence ID out of declared range")

        edge_ptr, edge_idx = _csr(e, v, m)
        # duplicates are adjacent after the (edge, vertex) sort
        if e.size > 1:
            sorted_e = np.repeat(np.arange(m, dtype=np.int64), np.diff(edge_ptr))
            dup = np.flatnonzero((sorted_e[1:] == sorted_e[:-1]) & (edge_idx[1:] == edge_idx[:-1]))
            if dup.size:
                k = dup[0]
                raise DuplicateIncidenceError(int(sorted_e[k]), int(edge_idx[k]))
        vertex_ptr, vertex_idx = _csr(v, e, n)
        return cls(n, m, edge_ptr, edge_idx, vertex_ptr, vertex_idx, edge_labels, vertex_labels)

    @classmethod
    def from_edge_lists(cls, edge_lists: Sequence[Iterable[int]], num_vertices=None,
                        edge_labels=None, vertex_labels=None) -> Hypergraph:
        sizes = [len(list(x)) if not hasattr(x, "__len__") else len(x) for x in edge_lists]
        edges = np.repeat(np.arange(len(edge_lists), dtype=np.int64), sizes)
        verts = np.fromiter((int(v) for x in edge_lists for v in x), dtype=np.int64, count=sum(sizes))
        return cls.from_incidences(edges, verts, num_edges=len(edge_lists), num_vertices=num_vertices,
                                   edge_labels=edge_labels, vertex_labels=vertex_labels)

    @classmethod
    def empty(cls) -> Hypergraph:
        return cls.from_incidences([], [])

    # -- basic queries --------------------------------------------------------

    @property
    def nnz(self) -> int:
        return int(self.edge_idx.size)

    @property
    def edge_sizes(self) -> np.ndarray:
        return np.diff(self.edge_ptr)

    @property
    def vertex_degrees(self) -> np.ndarray:
        return np.diff(self.vertex_ptr)

    def edge(self, e: int) -> np.ndarray:
        """Sorted member vertices of hyperedge ``e``."""
        return self.edge_idx[self.edge_ptr[e]:self.edge_ptr[e + 1]]

    def incident_edges(self, v: int) -> np.ndarray:
        """Sorted hyperedges containing vertex ``v``."""
        return self.vertex_idx[self.vertex_ptr[v]:self.vertex_ptr[v + 1]]

    def edge_lists(self) -> list[list[int]]:
        return [self.edge(e).tolist() for e in range(self.num_edges)]

    def edge_label(self, e: int):
        return e if self.edge_labels is None else self.edge_labels[e].item()

    def vertex_label(self, v: int):
        return v if self.vertex_labels is None else self.vertex_labels[v].item()

    def incidences(self) -> tuple[np.ndarray, np.ndarray]:
        """(edge, vertex) arrays in edge-major order."""
        e = np.repeat(np.arange(self.num_edges, dtype=np.int64), self.edge_sizes)
        return e, self.edge_idx.copy()

    @property
    def isolated_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.vertex_degrees == 0)

    @property
    def empty_edges(self) -> np.ndarray:
        return np.flatnonzero(self.edge_sizes == 0)

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (
            self.num_vertices == other.num_vertices
            and self.num_edges == other.num_edges
            and np.array_equal(self.edge_ptr, other.edge_ptr)
            and np.array_equal(self.edge_idx, other.edge_idx)
            and np.array_equal(self.vertex_ptr, other.vertex_ptr)
            and np.array_equal(self.vertex_idx, other.vertex_idx)
        )

    __hash__ = None

    def __repr__(self):
        return f"Hypergraph(n={self.num_vertices}, m={self.num_edges}, nnz={self.nnz})"

    def subhypergraph(self, keep_edges) -> tuple[Hypergraph, IdMap]:
        """Restrict to the given edge IDs (vertex set unchanged); edges are renumbered compactly."""
        emap = IdMap.from_ids(keep_edges)
        lists = [self.edge(e) for e in emap.forward]
        labels = None if self.edge_labels is None else self.edge_labels[emap.forward]
        sub = Hypergraph.from_edge_lists(lists, num_vertices=self.num_vertices,
                                         edge_labels=labels, vertex_labels=self.vertex_labels)
        return sub, emap


def dual(h: Hypergraph) -> Hypergraph:
    """The dual hypergraph: incidence matrix transposed, vertices and edges swap roles."""
    return Hypergraph(h.num_edges, h.num_vertices, h.vertex_ptr, h.vertex_idx,
                      h.edge_ptr, h.edge_idx, edge_labels=h.vertex_labels,
                      vertex_labels=h.edge_labels)


def _intersect_all(arrays) -> np.ndarray:
    return reduce(lambda a, b: np.intersect1d(a, b, assume_unique=True), arrays)


def inc(h: Hypergraph, edge_set) -> int:
    """Number of vertices common to every edge in ``edge_set``."""
    ids = sorted(set(int(e) for e in edge_set))
    if not ids:
        raise ValueError("inc() needs a non-empty edge set")
    if ids[0] < 0 or ids[-1] >= h.num_edges:
        raise ValueError("edge ID out of range")
    return int(_intersect_all([h.edge(e) for e in ids]).size)


def adj(h: Hypergraph, vertex_set) -> int:
    """Number of hyperedges containing every vertex in ``vertex_set``."""
    ids = sorted(set(int(v) for v in vertex_set))
    if not ids:
        raise ValueError("adj() needs a non-empty vertex set")
    if ids[0] < 0 or ids[-1] >= h.num_vertices:
        raise ValueError("vertex ID out of range")
    return int(_intersect_all([h.incident_edges(v) for v in ids]).size)


def remove_isolated(h: Hypergraph) -> tuple[Hypergraph, IdMap, IdMap]:
    """Drop degree-0 vertices and size-0 edges.

    Returns the compacted hypergraph with the vertex and edge maps (compact -> old ID).
    """
    vmap = IdMap(np.flatnonzero(h.vertex_degrees > 0))
    emap = IdMap(np.flatnonzero(h.edge_sizes > 0))
    if len(vmap) == h.num_vertices and len(emap) == h.num_edges:
        return h, vmap, emap
    e, v = h.incidences()
    new_v = np.empty(h.num_vertices, dtype=np.int64)
    new_v[vmap.forward] = np.arange(len(vmap))
    new_e = np.empty(h.num_edges, dtype=np.int64)
    new_e[emap.forward] = np.arange(len(emap))
    out = Hypergraph.from_incidences(
        new_e[e], new_v[v], num_edges=len(emap), num_vertices=len(vmap),
        edge_labels=None if h.edge_labels is None else h.edge_labels[emap.forward],
        vertex_labels=None if h.vertex_labels is None else h.vertex_labels[vmap.forward],
    )
    return out, vmap, emap


@dataclass(frozen=True, eq=False)
class RelabelOrder:
    """Edge-ID permutation produced by :func:`relabel_by_degree`.

    ``permutation[old] == new``.
    """

    variant: str | None
    permutation: np.ndarray

    @property
    def inverse(self) -> np.ndarray:
        inv = np.empty_like(self.permutation)
        inv[self.permutation] = np.arange(self.permutation.size, dtype=self.permutation.dtype)
        return inv

    def to_new(self, old_ids):
        return self.permutation[np.asarray(old_ids, dtype=np.int64)]

    def to_old(self, new_ids):
        return self.inverse[np.asarray(new_ids, dtype=np.int64)]

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.permutation, np.arange(self.permutation.size)))


_ORDERS = {None: None, "none": None, "asc": "asc", "desc": "desc",
           "ascending": "asc", "descending": "desc"}


def relabel_by_degree(h: Hypergraph, order="asc") -> tuple[Hypergraph, RelabelOrder]:
    """Permute edge IDs so edge sizes are monotone; ties keep original ID order."""
    try:
        variant = _ORDERS[order]
    except KeyError:
        raise ValueError(f"unknown relabel order {order!r}") from None
    sizes = h.edge_sizes
    if variant is None:
        return h, RelabelOrder(None, np.arange(h.num_edges, dtype=np.int64))
    key = sizes if variant == "asc" else -sizes
    new_to_old = np.argsort(key, kind="stable").astype(np.int64)
    perm = np.empty_like(new_to_old)
    perm[new_to_old] = np.arange(new_to_old.size, dtype=np.int64)
    relabel = RelabelOrder(variant, perm)
    if relabel.is_identity:
        return h, relabel
    # permute the CSR blocks directly instead of re-sorting every incidence
    new_sizes = sizes[new_to_old]
    edge_ptr = np.zeros(h.num_edges + 1, dtype=np.int64)
    np.cumsum(new_sizes, out=edge_ptr[1:])
    gather = np.repeat(h.edge_ptr[:-1][new_to_old] - edge_ptr[:-1], new_sizes) + np.arange(h.nnz)
    edge_idx = np.ascontiguousarray(h.edge_idx[gather])
    vertex_idx = _sort_rows(h.vertex_ptr, perm[h.vertex_idx], max(h.num_edges, 1))
    labels = None if h.edge_labels is None else h.edge_labels[new_to_old]
    out = Hypergraph(h.num_vertices, h.num_edges, edge_ptr, edge_idx, h.vertex_ptr.copy(), vertex_idx,
                     labels, None if h.vertex_labels is None else h.vertex_labels.copy())
    return out, relabel


def _is_subset(small: np.ndarray, big: np.ndarray) -> bool:
    if small.size > big.size:
        return False
    pos = np.searchsorted(big, small)
    return bool(np.all(pos < big.size) and np.array_equal(big[np.minimum(pos, big.size - 1)], small))


def toplexes(h: Hypergraph) -> np.ndarray:
    """IDs of maximal edges (no distinct superset); duplicates collapse to the lowest ID.

    Edges are scanned largest first, so every candidate superset of an edge has
    already been decided when the edge is examined. Candidates are restricted to
    toplexes incident to the edge's lowest-degree member vertex.
    """
    sizes = h.edge_sizes
    order = np.lexsort((np.arange(h.num_edges), -sizes))
    is_top = np.zeros(h.num_edges, dtype=bool)
    degrees = h.vertex_degrees
    for e in order:
        members = h.edge(e)
        if members.size == 0:
            # empty edges come last; one survives only if nothing else did
            is_top[e] = not is_top.any()
            continue
        pivot = members[np.argmin(degrees[members])]
        covered = False
        for f in h.incident_edges(pivot):
            if is_top[f] and _is_subset(members, h.edge(f)):
                covered = True
                break
        if not covered:
            is_top[e] = True
    return np.flatnonzero(is_top)


def simplify(h: Hypergraph) -> tuple[Hypergraph, IdMap]:
    """Restrict ``h`` to its toplexes. The map sends new edge IDs to old ones."""
    return h.subhypergraph(toplexes(h))
