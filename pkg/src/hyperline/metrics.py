"""s-metrics on constructed line graphs.

All functions take a :class:`~hyperline.linegraph.LineGraph` and report per-node
values aligned with ``g.nodes``.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from numba import njit

from .errors import ConvergenceError
from .linegraph.graph import LineGraph

DENSE_EIGEN_LIMIT = 512
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100_000


# -- connected components -----------------------------------------------------


@dataclass
class ComponentLabeling:
    """``labels[k]`` is the smallest node ID in the component of ``nodes[k]``."""

    nodes: np.ndarray
    labels: np.ndarray
    include_singletons: bool = True

    @property
    def count(self) -> int:
        return len(self.components)

    @property
    def components(self) -> list[np.ndarray]:
        """Node-ID arrays per component, ordered by label; singletons dropped if requested."""
        if self.nodes.size == 0:
            return []
        order = np.argsort(self.labels, kind="stable")
        groups = np.split(self.nodes[order], np.flatnonzero(np.diff(self.labels[order])) + 1)
        if not self.include_singletons:
            groups = [grp for grp in groups if grp.size > 1]
        return groups

    def label_of(self, node) -> int:
        return int(self.labels[np.searchsorted(self.nodes, node)])


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def _union_find_roots(k, local_edges):
    parent = list(range(k))
    for a, b in local_edges.tolist():
        ra, rb = _find(parent, a), _find(parent, b)
        if ra != rb:
            # smaller index wins so the root is the minimum member
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    return np.array([_find(parent, x) for x in range(k)], dtype=np.int64)


def _label_propagation_roots(k, local_edges):
    labels = np.arange(k, dtype=np.int64)
    if len(local_edges) == 0:
        return labels
    a, b = local_edges[:, 0], local_edges[:, 1]
    while True:
        low = np.minimum(labels[a], labels[b])
        new = labels.copy()
        np.minimum.at(new, a, low)
        np.minimum.at(new, b, low)
        if np.array_equal(new, labels):
            return labels
        labels = new


def s_connected_components(g: LineGraph, include_singletons: bool = True,
                           method: str = "union-find") -> ComponentLabeling:
    """Exact connected components; ``method`` is ``union-find`` or ``label-propagation``."""
    local = np.searchsorted(g.nodes, g.edges) if g.num_edges else np.empty((0, 2), np.int64)
    if method == "union-find":
        roots = _union_find_roots(g.num_nodes, local)
    elif method in ("label-propagation", "lp", "lpcc"):
        roots = _label_propagation_roots(g.num_nodes, local)
    else:
        raise ValueError(f"unknown component method {method!r}")
    return ComponentLabeling(g.nodes.copy(), g.nodes[roots] if g.num_nodes else roots,
                             include_singletons)


# -- s-distance -----------------------------------------------------------------


def _local_index(g: LineGraph, node) -> int:
    pos = int(np.searchsorted(g.nodes, node))
    if pos >= g.num_nodes or g.nodes[pos] != node:
        raise ValueError(f"node {node} is not in the line graph")
    return pos


def s_distance(g: LineGraph, src, dst) -> int | None:
    """Length of a shortest s-walk from ``src`` to ``dst``; ``None`` when unreachable."""
    a, b = _local_index(g, src), _local_index(g, dst)
    if a == b:
        return 0
    indptr, indices = g.local_adjacency()
    dist = {a: 0}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for y in indices[indptr[x]:indptr[x + 1]].tolist():
            if y not in dist:
                if y == b:
                    return dist[x] + 1
                dist[y] = dist[x] + 1
                queue.append(y)
    return None


def bfs_distances(g: LineGraph, src) -> np.ndarray:
    """Hop distance from ``src`` to every node (aligned with ``g.nodes``); -1 when unreachable."""
    a = _local_index(g, src)
    indptr, indices = g.local_adjacency()
    dist = np.full(g.num_nodes, -1, dtype=np.int64)
    dist[a] = 0
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for y in indices[indptr[x]:indptr[x + 1]].tolist():
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


# -- s-betweenness ----------------------------------------------------------------


@njit(nogil=True, cache=True)
def _brandes_sources(sources, indptr, indices):
    """Accumulate Brandes pair dependencies from the given BFS sources (ordered pairs)."""
    k = indptr.shape[0] - 1
    score = np.zeros(k, dtype=np.float64)
    dist = np.full(k, -1, dtype=np.int64)
    sigma = np.zeros(k, dtype=np.float64)
    delta = np.zeros(k, dtype=np.float64)
    stack = np.empty(k, dtype=np.int64)
    queue = np.empty(k, dtype=np.int64)
    for t in range(sources.shape[0]):
        src = sources[t]
        dist[src] = 0
        sigma[src] = 1.0
        head = 0
        tail = 1
        queue[0] = src
        n_stack = 0
        while head < tail:
            x = queue[head]
            head += 1
            stack[n_stack] = x
            n_stack += 1
            for p in range(indptr[x], indptr[x + 1]):
                y = indices[p]
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    queue[tail] = y
                    tail += 1
                if dist[y] == dist[x] + 1:
                    sigma[y] += sigma[x]
        for r in range(n_stack - 1, -1, -1):
            w = stack[r]
            for p in range(indptr[w], indptr[w + 1]):
                x = indices[p]
                if dist[x] == dist[w] - 1:
                    delta[x] += sigma[x] / sigma[w] * (1.0 + delta[w])
            if w != src:
                score[w] += delta[w]
        for r in range(n_stack):
            w = stack[r]
            dist[w] = -1
            sigma[w] = 0.0
            delta[w] = 0.0
    return score


def s_betweenness(g: LineGraph, normalized: bool = False, *, workers: int = 1) -> np.ndarray:
    """s-betweenness centrality over unordered pairs, aligned with ``g.nodes``.

    ``score(e) = sum over unordered pairs {f, g}, f != e != g, of
    sigma_fg(e) / sigma_fg``. With ``normalized`` the scores are divided by
    ``(k-1)(k-2)/2`` for ``k`` nodes. BFS sources are split cyclically over
    ``workers`` threads, each with its own accumulator.
    """
    k = g.num_nodes
    indptr, indices = g.local_adjacency()
    workers = max(1, min(workers, k)) if k else 1
    chunks = [np.arange(t, k, workers, dtype=np.int64) for t in range(workers)]
    if workers == 1:
        partial = [_brandes_sources(chunks[0], indptr, indices)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partial = list(pool.map(lambda c: _brandes_sources(c, indptr, indices), chunks))
    score = np.sum(partial, axis=0) / 2.0 if partial else np.zeros(k)
    if normalized:
        pairs = (k - 1) * (k - 2) / 2.0
        score = score / pairs if pairs > 0 else np.zeros(k)
    return score


# -- normalized algebraic connectivity ------------------------------------------


@dataclass
class SpectralResult:
    lambda2: float
    iterations: int
    residual: float
    method: str


def _normalized_laplacian(indptr, indices, k):
    a = sp.csr_matrix((np.ones(indices.size), indices, indptr), shape=(k, k))
    deg = np.asarray(a.sum(axis=1)).ravel()
    inv_sqrt = np.zeros(k)
    nz = deg > 0
    inv_sqrt[nz] = 1.0 / np.sqrt(deg[nz])
    d = sp.diags(inv_sqrt)
    # isolated vertices get a zero row and column (L[i, i] = 0)
    return sp.diags(nz.astype(float)) - d @ a @ d, deg


def _restrict(g: LineGraph, nodes) -> LineGraph:
    if nodes is None:
        return g
    keep = np.unique(np.asarray(nodes, dtype=np.int64))
    missing = ~np.isin(keep, g.nodes)
    if missing.any():
        raise ValueError(f"nodes {keep[missing].tolist()} are not in the line graph")
    mask = np.isin(g.edges[:, 0], keep) & np.isin(g.edges[:, 1], keep) if g.num_edges else np.zeros(0, bool)
    return LineGraph(g.s, g.edges[mask], keep, g.id_map)


def algebraic_connectivity(g: LineGraph, nodes=None, tol: float = DEFAULT_TOL,
                           max_iter: int = DEFAULT_MAX_ITER) -> SpectralResult:
    """Second-smallest eigenvalue of ``I - D^-1/2 A D^-1/2`` on the subgraph induced by ``nodes``.

    Dense symmetric eigensolve up to ``DENSE_EIGEN_LIMIT`` nodes; above that a
    Lanczos solve on ``I + D^-1/2 A D^-1/2`` with the known top eigenvector
    ``D^1/2 1`` projected out.
    """
    sub = _restrict(g, nodes)
    k = sub.num_nodes
    if k < 2:
        raise ValueError("algebraic connectivity needs at least 2 nodes")
    indptr, indices = sub.local_adjacency()
    lap, deg = _normalized_laplacian(indptr, indices, k)

    if k <= DENSE_EIGEN_LIMIT:
        vals, vecs = np.linalg.eigh(lap.toarray())
        vec = vecs[:, 1]
        residual = float(np.linalg.norm(lap @ vec - vals[1] * vec))
        return SpectralResult(float(np.clip(vals[1], 0.0, 2.0)), 1, residual, "dense")

    if np.any(deg == 0) or _has_multiple_components(indptr, indices, k):
        # disconnected restriction: a second zero eigenvalue exists
        return SpectralResult(0.0, 0, 0.0, "structural")
    top = np.sqrt(deg)
    top /= np.linalg.norm(top)
    shifted = sp.identity(k, format="csr") * 2.0 - lap

    calls = [0]

    def matvec(x):
        calls[0] += 1
        x = x - top * (top @ x)
        y = shifted @ x
        return y - top * (top @ y)

    op = spla.LinearOperator((k, k), matvec=matvec, dtype=np.float64)
    v0 = np.random.default_rng(0).standard_normal(k)
    try:
        vals, vecs = spla.eigsh(op, k=1, which="LA", tol=tol, maxiter=max_iter, v0=v0)
    except spla.ArpackNoConvergence as exc:
        best = np.inf
        if exc.eigenvalues.size:
            mu, vec = exc.eigenvalues[0], exc.eigenvectors[:, 0]
            best = float(np.linalg.norm(lap @ vec - (2.0 - mu) * vec))
        raise ConvergenceError("Lanczos solve for lambda2 did not converge", best, max_iter) from None
    lam = float(2.0 - vals[0])
    vec = vecs[:, 0]
    residual = float(np.linalg.norm(lap @ vec - lam * vec))
    return SpectralResult(lam, calls[0], residual, "lanczos")


def _has_multiple_components(indptr, indices, k) -> bool:
    n_comp, _ = sp.csgraph.connected_components(
        sp.csr_matrix((np.ones(indices.size), indices, indptr), shape=(k, k)), directed=False)
    return n_comp > 1


def algebraic_connectivity_by_component(g: LineGraph, labeling: ComponentLabeling | None = None,
                                        tol: float = DEFAULT_TOL) -> dict[int, SpectralResult]:
    """lambda2 for every component with at least 2 nodes, keyed by component label."""
    labeling = labeling or s_connected_components(g, include_singletons=False)
    out = {}
    for comp in labeling.components:
        if comp.size >= 2:
            out[int(comp.min())] = algebraic_connectivity(g, comp, tol)
    return out


# -- PageRank ---------------------------------------------------------------------


def pagerank(g: LineGraph, damping: float = 0.85, tol: float = 1e-12,
             max_iter: int = DEFAULT_MAX_ITER) -> np.ndarray:
    """PageRank by power iteration with uniform teleport, aligned with ``g.nodes``.

    The mass of degree-0 nodes is spread uniformly, so isolated nodes end up with
    teleport-level mass only and the vector sums to 1. Stops when the L1 change
    falls below ``tol``.
    """
    if not 0 < damping < 1:
        raise ValueError("damping must be in (0, 1)")
    k = g.num_nodes
    if k == 0:
        return np.zeros(0)
    indptr, indices = g.local_adjacency()
    deg = np.diff(indptr).astype(np.float64)
    dangling = deg == 0
    a = sp.csr_matrix((np.ones(indices.size), indices, indptr), shape=(k, k))
    inv_deg = np.zeros(k)
    inv_deg[~dangling] = 1.0 / deg[~dangling]
    x = np.full(k, 1.0 / k)
    residual = np.inf
    for it in range(1, max_iter + 1):
        spread = a.T @ (x * inv_deg)
        new = damping * (spread + x[dangling].sum() / k) + (1.0 - damping) / k
        new /= new.sum()
        residual = float(np.abs(new - x).sum())
        x = new
        if residual < tol:
            return x
    raise ConvergenceError("PageRank did not converge", residual, max_iter)


# -- ranking stability ----------------------------------------------------------


def score_percentiles(scores) -> np.ndarray:
    """Percentile (0-100] of each score within the vector: share of scores <= it."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size == 0:
        return scores
    ranks = np.searchsorted(np.sort(scores), scores, side="right")
    return 100.0 * ranks / scores.size


def top_q_retention(ids_a, scores_a, ids_b, scores_b, q: int) -> float:
    """Fraction of the top-``q`` IDs under ``scores_a`` that stay in the top-``q`` under ``scores_b``.

    IDs are matched across the two graphs (e.g. original vertex IDs of s=1 and
    s>1 clique graphs). Ties are broken by ID.
    """
    def top(ids, scores):
        ids = np.asarray(ids)
        order = np.lexsort((ids, -np.asarray(scores, dtype=np.float64)))
        return set(ids[order[:q]].tolist())

    base = top(ids_a, scores_a)
    return len(base & top(ids_b, scores_b)) / len(base) if base else 1.0
