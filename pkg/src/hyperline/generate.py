"""Seeded synthetic hypergraphs with a skewed (truncated power-law) edge-size distribution."""

from __future__ import annotations

import numpy as np

from .hypergraph import Hypergraph


def power_law_sizes(rng: np.random.Generator, count: int, exponent: float, max_size: int,
                    min_size: int = 1) -> np.ndarray:
    """Draw ``count`` sizes with P(k) proportional to k**-exponent on [min_size, max_size]."""
    support = np.arange(min_size, max_size + 1, dtype=np.float64)
    weights = support ** -exponent
    return rng.choice(support.astype(np.int64), size=count, p=weights / weights.sum())


def generate_synthetic(m: int, n: int, degree_exponent: float = 2.1, max_size: int | None = None,
                       seed: int = 0, *, blocks: int = 0, min_size: int = 1) -> Hypergraph:
    """Random hypergraph with ``m`` edges over ``n`` vertices.

    Edge sizes follow a truncated power law with the given exponent; members are
    sampled without replacement. With ``blocks > 0`` the vertex set is covered by
    that many overlapping windows (each twice the average stride wide, wrapping
    around) and every edge draws its members from one random window, a rough
    stand-in for community-derived hypergraphs. Window width never drops below
    ``max_size``.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    if degree_exponent <= 1:
        raise ValueError("degree_exponent must be > 1")
    max_size = n if max_size is None else int(max_size)
    if max_size > n:
        raise ValueError(f"max_size={max_size} exceeds n={n}")
    if not 1 <= min_size <= max_size:
        raise ValueError("need 1 <= min_size <= max_size")

    rng = np.random.default_rng(seed)
    sizes = power_law_sizes(rng, m, degree_exponent, max_size, min_size)
    if blocks > 0:
        stride = n / blocks
        width = min(n, max(max_size, int(np.ceil(2 * stride))))
        starts = (np.arange(blocks) * stride).astype(np.int64)
        picks = rng.integers(0, blocks, size=m)

    members = []
    for e in range(m):
        k = int(sizes[e])
        if blocks > 0:
            local = rng.choice(width, size=k, replace=False)
            members.append((starts[picks[e]] + local) % n)
        elif k * 4 < n:
            # rejection is cheaper than a full permutation for small edges
            chosen = np.unique(rng.integers(0, n, size=k))
            while chosen.size < k:
                chosen = np.unique(np.concatenate([chosen, rng.integers(0, n, size=k - chosen.size)]))
            members.append(chosen)
        else:
            members.append(rng.choice(n, size=k, replace=False))
    return Hypergraph.from_edge_lists(members, num_vertices=n)
