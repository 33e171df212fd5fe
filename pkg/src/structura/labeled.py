"""Exhaustive tables over all labeled graphs on [n], indexed by edge mask."""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Iterator

import numpy as np

from . import kernels
from .canon import certificate
from .graph import Graph, num_pairs

CHUNK = 1 << 22


@lru_cache(maxsize=16)
def features(n: int) -> dict[str, np.ndarray]:
    """Full feature arrays for every mask on [n] (n <= 7 keeps this small)."""
    out = kernels.mask_features(n, 0, 1 << num_pairs(n))
    for arr in out.values():
        arr.setflags(write=False)
    return out


def feature_chunks(n: int, chunk: int = CHUNK) -> Iterator[tuple[int, int, dict[str, np.ndarray]]]:
    total = 1 << num_pairs(n)
    if total <= chunk:
        yield 0, total, features(n)
        return
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        yield start, stop, kernels.mask_features(n, start, stop)


def labeled_copies(h: Graph) -> np.ndarray:
    """Edge masks of every labeled copy of ``h`` on [v(h)]."""
    seen = set()
    for perm in permutations(range(1, h.n + 1)):
        seen.add(h.relabel(perm).mask())
    return np.array(sorted(seen), dtype=np.int64)


@lru_cache(maxsize=64)
def _minor_bitmap(hkey: tuple[int, int], n: int) -> np.ndarray | None:
    hn, hmask = hkey
    if n < hn:
        return None
    h = Graph.from_mask(hn, hmask)
    prev = _minor_bitmap(hkey, n - 1)
    base = labeled_copies(h) if n == hn else np.zeros(0, dtype=np.int64)
    out = kernels.minor_level(n, prev, base)
    out.setflags(write=False)
    return out


def minor_bitmap(h: Graph, n: int) -> np.ndarray:
    """bitmap[mask] is True iff the graph on [n] with that mask has ``h`` as a minor."""
    if h.n == 0:
        return np.ones(1 << num_pairs(n), dtype=bool)
    got = _minor_bitmap(certificate(h), n)
    if got is None:
        return np.zeros(1 << num_pairs(n), dtype=bool)
    return got


def popcount(x: np.ndarray) -> np.ndarray:
    from .kernels._tables import POP8

    x = x.astype(np.uint64)
    total = np.zeros(x.shape, dtype=np.int64)
    while True:
        if not x.any():
            return total
        total += POP8[(x & np.uint64(0xFF)).astype(np.uint8)]
        x = x >> np.uint64(8)
