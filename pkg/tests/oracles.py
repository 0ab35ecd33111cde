"""Independent reference implementations used as test oracles.

Nothing here shares code with the package: dense matrices, brute-force path
enumeration and exact rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np


def dense_incidence(edge_lists, n):
    h = np.zeros((len(edge_lists), n), dtype=np.int64)
    for e, members in enumerate(edge_lists):
        h[e, list(members)] = 1
    return h


def line_graph_oracle(edge_lists, n, s):
    """(edge set, node set) of L_s from the dense overlap matrix H H^T."""
    h = dense_incidence(edge_lists, n)
    overlap = h @ h.T
    sizes = h.sum(axis=1)
    m = len(edge_lists)
    edges = {(i, j) for i in range(m) for j in range(i + 1, m) if overlap[i, j] >= s}
    nodes = {i for i in range(m) if sizes[i] >= s}
    return edges, nodes


def clique_graph_oracle(edge_lists, n, s):
    """Edges of the s-clique graph by thresholding W = H^T H - D_V."""
    h = dense_incidence(edge_lists, n)
    w = h.T @ h
    w -= np.diag(np.diag(w))
    return {(i, j) for i in range(n) for j in range(i + 1, n) if w[i, j] >= s}


def _all_shortest_paths(adj, src, dst):
    """Every shortest src-dst path, by BFS layering then DFS enumeration."""
    dist = {src: 0}
    frontier = [src]
    while frontier and dst not in dist:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    if dst not in dist:
        return []
    paths = []

    def walk(path):
        u = path[-1]
        if u == dst:
            paths.append(list(path))
            return
        for w in adj[u]:
            if dist.get(w) == dist[u] + 1 and dist[w] <= dist[dst]:
                path.append(w)
                walk(path)
                path.pop()

    walk([src])
    return paths


def betweenness_oracle(nodes, edges):
    """Exact unordered-pair betweenness as Fractions, keyed by node."""
    adj = {u: [] for u in nodes}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    score = {u: Fraction(0) for u in nodes}
    for f, g in combinations(nodes, 2):
        paths = _all_shortest_paths(adj, f, g)
        for p in paths:
            for e in p[1:-1]:
                score[e] += Fraction(1, len(paths))
    return score


def pagerank_oracle(k, edges, damping):
    """Solve (I - d M) x = (1-d)/k * 1 with dangling columns spread uniformly."""
    a = np.zeros((k, k))
    for u, v in edges:
        a[u, v] = a[v, u] = 1.0
    deg = a.sum(axis=0)
    m = np.where(deg > 0, a / np.where(deg > 0, deg, 1.0), 1.0 / k)
    x = np.linalg.solve(np.eye(k) - damping * m, np.full(k, (1 - damping) / k))
    return x / x.sum()


def normalized_laplacian_lambda2(k, edges):
    a = np.zeros((k, k))
    for u, v in edges:
        a[u, v] = a[v, u] = 1.0
    d = a.sum(axis=1)
    inv = np.where(d > 0, 1 / np.sqrt(np.where(d > 0, d, 1)), 0.0)
    lap = np.diag((d > 0).astype(float)) - inv[:, None] * a * inv[None, :]
    return np.linalg.eigvalsh(lap)[1]


def random_edge_lists(rng, m, n, skewed):
    """Random edge lists over n vertices; skewed draws sizes from a Zipf-like law."""
    if skewed:
        sizes = np.minimum(rng.zipf(1.8, size=m), n)
    else:
        sizes = rng.integers(1, min(n, 12) + 1, size=m)
    return [sorted(rng.choice(n, size=int(k), replace=False).tolist()) for k in sizes]
