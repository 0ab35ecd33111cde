"""Benchmark harness: configuration grids, strong and weak scaling.

Configurations use the compact three-character notation ``<algo><partition><relabel>``:
algorithm ``1`` (intersection) or ``2`` (hashmap), partition ``B`` (blocked) or
``C`` (cyclic), relabel ``A`` (ascending), ``D`` (descending) or ``N`` (none).
``2BA`` is the hashmap algorithm with blocked partitioning on ascending-relabeled
input. Every timed run includes the relabel step.
"""

from __future__ import annotations

import csv
import json
import statistics
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError
from .hypergraph import Hypergraph, relabel_by_degree
from .linegraph import (
    PartitionStrategy,
    slinegraph_hashmap,
    slinegraph_intersection,
    slinegraph_naive,
    slinegraph_spgemm,
)

_ALGO_CODES = {"1": "intersection", "2": "hashmap"}
_PART_CODES = {"B": "blocked", "C": "cyclic"}
_RELABEL_CODES = {"A": "asc", "D": "desc", "N": "none"}
_BUILDERS = {
    "intersection": slinegraph_intersection,
    "hashmap": slinegraph_hashmap,
}


@dataclass(frozen=True)
class BenchCase:
    algorithm: str
    partition: str = "blocked"
    relabel: str = "none"
    threads: int = 1

    @property
    def notation(self) -> str:
        algo = {v: k for k, v in _ALGO_CODES.items()}.get(self.algorithm, self.algorithm)
        part = {v: k for k, v in _PART_CODES.items()}[self.partition]
        rel = {v: k for k, v in _RELABEL_CODES.items()}[self.relabel]
        return f"{algo}{part}{rel}"


def parse_notation(code: str, threads: int = 1) -> BenchCase:
    """``'2BA'`` -> BenchCase('hashmap', 'blocked', 'asc')."""
    code = code.strip().upper()
    if len(code) != 3 or code[0] not in _ALGO_CODES or code[1] not in _PART_CODES \
            or code[2] not in _RELABEL_CODES:
        raise ConfigError(f"bad configuration code {code!r}; expected e.g. 1CN or 2BA")
    return BenchCase(_ALGO_CODES[code[0]], _PART_CODES[code[1]], _RELABEL_CODES[code[2]], threads)


def run_case(h: Hypergraph, case: BenchCase, s: int, *, chunk: int = 64):
    """Relabel then build once; returns (seconds, LineGraph)."""
    part = PartitionStrategy(case.partition, chunk)
    t0 = time.perf_counter()
    work, _ = relabel_by_degree(h, case.relabel)
    if case.algorithm in _BUILDERS:
        g = _BUILDERS[case.algorithm](work, s, part, workers=case.threads)
    elif case.algorithm == "spgemm":
        g = slinegraph_spgemm(work, s, part=part, workers=case.threads)
    elif case.algorithm == "naive":
        g = slinegraph_naive(work, s)
    else:
        raise ConfigError(f"unknown algorithm {case.algorithm!r}")
    return time.perf_counter() - t0, g


_TINY = Hypergraph.from_edge_lists([[0, 1, 2], [1, 2], [2, 3]])


def time_case(h: Hypergraph, case: BenchCase, s: int, *, repeats: int = 3, chunk: int = 64) -> dict:
    run_case(_TINY, case, 1, chunk=chunk)  # keep JIT loading out of the measurement
    times = []
    g = None
    for _ in range(repeats):
        dt, g = run_case(h, case, s, chunk=chunk)
        times.append(dt)
    return {
        "config": case.notation,
        "algorithm": case.algorithm,
        "partition": case.partition,
        "relabel": case.relabel,
        "threads": case.threads,
        "median_s": statistics.median(times),
        "times_s": times,
        "edges": g.num_edges,
        "visits": g.stats.visits.tolist() if g.stats is not None else [],
        "set_intersections": g.stats.total("set_intersections") if g.stats is not None else 0,
    }


@dataclass
class BenchReport:
    mode: str
    s: int
    baseline: str | None
    rows: list[dict] = field(default_factory=list)

    columns = ("config", "algorithm", "partition", "relabel", "threads", "input_scale",
               "median_s", "speedup", "violation", "edges", "set_intersections")

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=self.columns, extrasaction="ignore")
            writer.writeheader()
            for row in self.rows:
                writer.writerow({c: row.get(c, "") for c in self.columns})

    def write_json(self, path) -> None:
        doc = {"mode": self.mode, "s": self.s, "baseline": self.baseline, "rows": self.rows}
        Path(path).write_text(json.dumps(doc, indent=2) + "\n")

    def as_dict(self) -> dict:
        return asdict(self)


def _cases(grid: Sequence[str | BenchCase], threads: Sequence[int]) -> list[BenchCase]:
    if not grid:
        raise ConfigError("benchmark grid is empty")
    out = []
    for t in threads:
        for item in grid:
            base = parse_notation(item) if isinstance(item, str) else item
            out.append(BenchCase(base.algorithm, base.partition, base.relabel, int(t)))
    return out


def bench_grid(h: Hypergraph, grid: Sequence[str | BenchCase], s: int, *,
               threads: Sequence[int] = (1,), baseline: str | None = None,
               repeats: int = 3, chunk: int = 64) -> BenchReport:
    """Median-of-``repeats`` timing for every configuration at every thread count.

    Speedups are relative to ``baseline`` at the same thread count; by default the
    first configuration of the grid.
    """
    cases = _cases(grid, threads)
    notations = [c.notation for c in cases]
    baseline = (baseline or notations[0]).upper()
    if baseline not in notations:
        raise ConfigError(f"baseline {baseline!r} is not part of the grid {sorted(set(notations))}")
    rows = [time_case(h, c, s, repeats=repeats, chunk=chunk) for c in cases]
    ref = {r["threads"]: r["median_s"] for r in rows if r["config"] == baseline}
    for r in rows:
        r["input_scale"] = 1
        r["speedup"] = ref[r["threads"]] / r["median_s"] if r["median_s"] > 0 else float("inf")
        r["violation"] = False
    return BenchReport("grid", s, baseline, rows)


def strong_scaling(h: Hypergraph, config: str | BenchCase, s: int, *,
                   threads: Sequence[int] = (1, 2, 4), repeats: int = 3, chunk: int = 64) -> BenchReport:
    """Fixed input, growing thread count. A slowdown versus the previous row is flagged."""
    rows = [time_case(h, c, s, repeats=repeats, chunk=chunk) for c in _cases([config], threads)]
    t0 = rows[0]["median_s"]
    for i, r in enumerate(rows):
        r["input_scale"] = 1
        r["speedup"] = t0 / r["median_s"] if r["median_s"] > 0 else float("inf")
        r["violation"] = i > 0 and r["median_s"] > rows[i - 1]["median_s"]
    return BenchReport("strong", s, rows[0]["config"], rows)


def weak_scaling(make_input: Callable[[int], Hypergraph], config: str | BenchCase, s: int, *,
                 threads: Sequence[int] = (1, 2, 4), repeats: int = 3, chunk: int = 64) -> BenchReport:
    """Input grows with the thread count: ``make_input(k)`` for ``k = threads[i] / threads[0]``.

    ``speedup`` here is the weak-scaling efficiency ``t(first) / t(row)``; ideal is 1.
    """
    rows = []
    for c in _cases([config], threads):
        scale = c.threads // threads[0]
        row = time_case(make_input(scale), c, s, repeats=repeats, chunk=chunk)
        row["input_scale"] = scale
        rows.append(row)
    t0 = rows[0]["median_s"]
    for r in rows:
        r["speedup"] = t0 / r["median_s"] if r["median_s"] > 0 else float("inf")
        r["violation"] = False
    return BenchReport("weak", s, rows[0]["config"], rows)


def estimate_naive_seconds(h: Hypergraph, s: int, *, sample: int = 500, seed: int = 0) -> float:
    """Extrapolated all-pairs runtime from a random subsample of source edges.

    Source ``i`` compares against every ``j > i``, so the estimate scales the
    sampled time by total pairs over sampled pairs.
    """
    m = h.num_edges
    if m < 2:
        return 0.0
    rng = np.random.default_rng(seed)
    src = np.sort(rng.choice(m, size=min(sample, m), replace=False)).astype(np.int64)
    sampled_pairs = float(np.sum(m - 1 - src))
    total_pairs = m * (m - 1) / 2
    t0 = time.perf_counter()
    slinegraph_naive(h, s, sources=src)
    dt = time.perf_counter() - t0
    return dt * total_pairs / sampled_pairs if sampled_pairs else 0.0
