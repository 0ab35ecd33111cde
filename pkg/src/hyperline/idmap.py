from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class IdMap:
    """Order-preserving bijection between compact IDs ``0..k-1`` and sparse original IDs.

    ``forward[c]`` is the original ID of compact ID ``c``; it is strictly increasing.
    """

    forward: np.ndarray

    def __post_init__(self):
        fwd = np.asarray(self.forward, dtype=np.int64).reshape(-1)
        if fwd.size > 1 and np.any(np.diff(fwd) <= 0):
            raise ValueError("IdMap.forward must be strictly increasing")
        fwd.setflags(write=False)
        object.__setattr__(self, "forward", fwd)

    @classmethod
    def identity(cls, size: int) -> IdMap:
        return cls(np.arange(size, dtype=np.int64))

    @classmethod
    def from_ids(cls, ids) -> IdMap:
        return cls(np.unique(np.asarray(ids, dtype=np.int64)))

    def __len__(self) -> int:
        return int(self.forward.size)

    def __eq__(self, other):
        if not isinstance(other, IdMap):
            return NotImplemented
        return np.array_equal(self.forward, other.forward)

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.forward, np.arange(self.forward.size)))

    def to_original(self, compact):
        return self.forward[np.asarray(compact, dtype=np.int64)]

    def to_compact(self, original):
        """Inverse lookup; raises ``KeyError`` for IDs outside the map."""
        original = np.asarray(original, dtype=np.int64)
        pos = np.searchsorted(self.forward, original)
        pos_clipped = np.minimum(pos, max(self.forward.size - 1, 0))
        if self.forward.size == 0 or np.any(self.forward[pos_clipped] != original):
            raise KeyError("ID not present in map")
        return pos

    def contains(self, original) -> np.ndarray:
        original = np.asarray(original, dtype=np.int64)
        if self.forward.size == 0:
            return np.zeros(original.shape, dtype=bool)
        pos = np.minimum(np.searchsorted(self.forward, original), self.forward.size - 1)
        return self.forward[pos] == original

    def compose(self, inner: IdMap) -> IdMap:
        """Map compact IDs of ``inner`` through ``self``: result[c] = self.forward[inner.forward[c]]."""
        return IdMap(self.forward[inner.forward])
