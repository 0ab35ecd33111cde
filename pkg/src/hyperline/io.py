"""Readers and writers for incidence files, line-graph edge lists and ID-map sidecars.

Incidence formats:

* ``mm``  - Matrix Market coordinate, rows are vertices, columns are hyperedges,
  1-based. ``pattern`` and ``integer`` fields are accepted; an explicit zero
  entry is not an incidence.
* ``tsv`` - one ``<edge_id>\\t<vertex_id>`` pair per line, 0-based, ``#`` comments.
  Edge and vertex IDs are compacted to ``0..m-1`` / ``0..n-1`` in ascending order
  and the original IDs kept as labels.
"""

from __future__ import annotations

import io
import os
from pathlib import Path

import numpy as np

from .errors import DuplicateIncidenceError, ParseError
from .hypergraph import Hypergraph

FORMATS = ("mm", "tsv")
_FORMAT_ALIASES = {"mm": "mm", "mtx": "mm", "matrix-market": "mm", "matrixmarket": "mm",
                   "tsv": "tsv", "tsv-pairs": "tsv", "pairs": "tsv"}


def _lines(source):
    """Yield decoded text lines from a path, bytes, or (binary or text) stream."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            yield from _lines(fh)
        return
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    for raw in source:
        yield raw.decode("utf-8") if isinstance(raw, (bytes, bytearray)) else raw


def _parse_id(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"expected a non-negative integer, got {token!r}", lineno) from None
    if value < 0:
        raise ParseError(f"negative ID {value}", lineno)
    return value


def _check_duplicates(edges, verts, lines):
    if edges.size < 2:
        return
    order = np.lexsort((verts, edges))
    e, v = edges[order], verts[order]
    dup = np.flatnonzero((e[1:] == e[:-1]) & (v[1:] == v[:-1]))
    if dup.size:
        k = order[dup[0] + 1]
        raise DuplicateIncidenceError(int(edges[k]), int(verts[k]), int(lines[k]))


def read_tsv_pairs(source) -> Hypergraph:
    edges, verts, lines = [], [], []
    for lineno, line in enumerate(_lines(source), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise ParseError(f"expected 2 fields, found {len(parts)}", lineno)
        edges.append(_parse_id(parts[0], lineno))
        verts.append(_parse_id(parts[1], lineno))
        lines.append(lineno)
    edges = np.asarray(edges, dtype=np.int64)
    verts = np.asarray(verts, dtype=np.int64)
    _check_duplicates(edges, verts, np.asarray(lines))
    edge_labels, e = np.unique(edges, return_inverse=True)
    vertex_labels, v = np.unique(verts, return_inverse=True)
    return Hypergraph.from_incidences(e, v, num_edges=edge_labels.size, num_vertices=vertex_labels.size,
                                      edge_labels=edge_labels, vertex_labels=vertex_labels)


def read_matrix_market(source) -> Hypergraph:
    it = iter(enumerate(_lines(source), start=1))
    try:
        lineno, header = next(it)
    except StopIteration:
        return Hypergraph.empty()
    tokens = header.strip().lower().split()
    if len(tokens) < 5 or tokens[0] != "%%matrixmarket" or tokens[1] != "matrix":
        raise ParseError("missing '%%MatrixMarket matrix' header", lineno)
    if tokens[2] != "coordinate":
        raise ParseError(f"unsupported layout {tokens[2]!r}; only 'coordinate' is read", lineno)
    field, symmetry = tokens[3], tokens[4]
    if field not in ("pattern", "integer"):
        raise ParseError(f"unsupported field {field!r}; incidences must be pattern or integer", lineno)
    if symmetry != "general":
        raise ParseError(f"unsupported symmetry {symmetry!r} for an incidence matrix", lineno)

    size = None
    rows, cols, lines = [], [], []
    for lineno, line in it:
        stripped = line.strip()
        if not stripped or stripped.startswith("%"):
            continue
        parts = stripped.split()
        if size is None:
            if len(parts) != 3:
                raise ParseError("size line must be '<rows> <cols> <nnz>'", lineno)
            size = tuple(_parse_id(p, lineno) for p in parts)
            continue
        want = 2 if field == "pattern" else 3
        if len(parts) != want:
            raise ParseError(f"expected {want} fields, found {len(parts)}", lineno)
        r, c = _parse_id(parts[0], lineno), _parse_id(parts[1], lineno)
        if not (1 <= r <= size[0] and 1 <= c <= size[1]):
            raise ParseError(f"entry ({r}, {c}) outside declared {size[0]}x{size[1]}", lineno)
        if field == "integer" and _parse_int_value(parts[2], lineno) == 0:
            continue
        rows.append(r - 1)
        cols.append(c - 1)
        lines.append(lineno)
    if size is None:
        raise ParseError("missing size line", lineno)
    verts = np.asarray(rows, dtype=np.int64)
    edges = np.asarray(cols, dtype=np.int64)
    _check_duplicates(edges, verts, np.asarray(lines))
    return Hypergraph.from_incidences(edges, verts, num_edges=size[1], num_vertices=size[0])


def _parse_int_value(token, lineno):
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer value, got {token!r}", lineno) from None


def load_hypergraph(source, format: str = "tsv") -> Hypergraph:
    """Load a hypergraph from a path, bytes, or stream in ``mm`` or ``tsv`` format."""
    try:
        fmt = _FORMAT_ALIASES[format.lower()]
    except KeyError:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}") from None
    if fmt == "mm":
        return read_matrix_market(source)
    return read_tsv_pairs(source)


def write_tsv_pairs(h: Hypergraph, path) -> None:
    e, v = h.incidences()
    el = e if h.edge_labels is None else h.edge_labels[e]
    vl = v if h.vertex_labels is None else h.vertex_labels[v]
    with open(path, "w") as fh:
        fh.write("# edge\tvertex\n")
        for a, b in zip(el.tolist(), vl.tolist()):
            fh.write(f"{a}\t{b}\n")


def write_matrix_market(h: Hypergraph, path) -> None:
    e, v = h.incidences()
    with open(path, "w") as fh:
        fh.write("%%MatrixMarket matrix coordinate pattern general\n")
        fh.write(f"{h.num_vertices} {h.num_edges} {h.nnz}\n")
        order = np.lexsort((v, e))
        for a, b in zip((v[order] + 1).tolist(), (e[order] + 1).tolist()):
            fh.write(f"{a} {b}\n")


def write_edge_list(path, edges: np.ndarray, *, s=None, num_nodes=None, header=True) -> None:
    """Write ``<u> <v>`` lines (u < v, sorted) with an optional ``# s=.. nodes=.. edges=..`` header."""
    edges = np.asarray(edges).reshape(-1, 2)
    with open(path, "w") as fh:
        if header:
            fh.write(f"# s={s} nodes={num_nodes} edges={len(edges)}\n")
        for u, v in edges.tolist():
            fh.write(f"{u} {v}\n")


def read_edge_list(path) -> tuple[np.ndarray, dict]:
    """Inverse of :func:`write_edge_list`; returns (edges, header fields)."""
    meta, rows = {}, []
    for lineno, line in enumerate(_lines(Path(path)), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            for item in stripped[1:].split():
                key, _, value = item.partition("=")
                if value:
                    meta[key] = value
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise ParseError(f"expected 2 fields, found {len(parts)}", lineno)
        rows.append((_parse_id(parts[0], lineno), _parse_id(parts[1], lineno)))
    return np.asarray(rows, dtype=np.int64).reshape(-1, 2), meta


def write_idmap(path, forward, labels=None) -> None:
    forward = np.asarray(forward)
    originals = forward if labels is None else np.asarray(labels)[forward]
    with open(path, "w") as fh:
        for c, o in enumerate(originals.tolist()):
            fh.write(f"{c} {o}\n")


def read_idmap(path) -> np.ndarray:
    """Read a ``<compact_id> <original_id>`` sidecar into a forward array."""
    pairs = []
    for lineno, line in enumerate(_lines(Path(path)), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise ParseError(f"expected 2 fields, found {len(parts)}", lineno)
        pairs.append((_parse_id(parts[0], lineno), _parse_id(parts[1], lineno)))
    pairs.sort()
    if [c for c, _ in pairs] != list(range(len(pairs))):
        raise ParseError("compact IDs in ID map are not contiguous from 0")
    return np.asarray([o for _, o in pairs], dtype=np.int64)
