from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_CHUNK = 64
MAX_CHUNK = 16384


@dataclass(frozen=True)
class PartitionStrategy:
    """How source hyperedges of the outer loop are dealt to workers.

    ``blocked``: IDs are cut into chunks of ``chunk_size`` contiguous IDs and each
    worker receives one contiguous run of chunks, so worker 0 holds the lowest IDs
    and the last worker the highest.
    ``cyclic``: worker ``t`` takes IDs ``t, t + w, t + 2w, ...`` for ``w`` workers.
    """

    kind: str = "blocked"
    chunk_size: int = DEFAULT_CHUNK

    def __post_init__(self):
        if self.kind not in ("blocked", "cyclic"):
            raise ValueError(f"unknown partition kind {self.kind!r}")
        if not 1 <= self.chunk_size <= MAX_CHUNK:
            raise ValueError(f"chunk_size must be in 1..{MAX_CHUNK}")

    @classmethod
    def blocked(cls, chunk_size: int = DEFAULT_CHUNK) -> PartitionStrategy:
        return cls("blocked", chunk_size)

    @classmethod
    def cyclic(cls) -> PartitionStrategy:
        return cls("cyclic")

    @property
    def code(self) -> str:
        return "B" if self.kind == "blocked" else "C"

    def assign(self, num_items: int, workers: int) -> list[np.ndarray]:
        """Source IDs per worker; together they cover ``range(num_items)`` exactly once."""
        if workers < 1:
            raise ValueError("workers must be >= 1")
        if self.kind == "cyclic":
            return [np.arange(t, num_items, workers, dtype=np.int64) for t in range(workers)]
        n_chunks = -(-num_items // self.chunk_size)
        out = []
        for t in range(workers):
            c0 = t * n_chunks // workers
            c1 = (t + 1) * n_chunks // workers
            out.append(np.arange(c0 * self.chunk_size, min(c1 * self.chunk_size, num_items),
                                 dtype=np.int64))
        return out


def parse_partition(name: str, chunk_size: int = DEFAULT_CHUNK) -> PartitionStrategy:
    name = name.lower()
    if name in ("blocked", "b"):
        return PartitionStrategy.blocked(chunk_size)
    if name in ("cyclic", "c"):
        return PartitionStrategy.cyclic()
    raise ValueError(f"unknown partition {name!r}")
