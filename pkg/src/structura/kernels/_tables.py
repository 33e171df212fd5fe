"""Small lookup tables shared by both kernel back-ends."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)


@lru_cache(maxsize=None)
def pair_table(n: int) -> np.ndarray:
    """pair_table(n)[i, j] = bit index of the 0-based pair {i, j}; -1 on the diagonal."""
    t = np.full((max(n, 1), max(n, 1)), -1, dtype=np.int64)
    for j in range(1, n):
        for i in range(j):
            t[i, j] = t[j, i] = j * (j - 1) // 2 + i
    t.setflags(write=False)
    return t


def _shift(w: int, gone: int) -> int:
    return w - 1 if w > gone else w


@lru_cache(maxsize=None)
def contraction_targets(n: int) -> tuple:
    """For each pair (u, v), u < v: where each bit lands after contracting uv into u."""
    pt = pair_table(n - 1) if n >= 2 else None
    out = []
    for v in range(1, n):
        for u in range(v):
            tgt = np.full(n * (n - 1) // 2, -1, dtype=np.int64)
            for b in range(1, n):
                for a in range(b):
                    fa = u if a == v else _shift(a, v)
                    fb = u if b == v else _shift(b, v)
                    if fa != fb:
                        tgt[b * (b - 1) // 2 + a] = pt[fa, fb]
            tgt.setflags(write=False)
            out.append(((u, v), tgt))
    return tuple(out)


@lru_cache(maxsize=None)
def deletion_targets(n: int) -> tuple:
    """For each vertex x: where each bit lands after deleting x (pairs at x map to -1)."""
    pt = pair_table(n - 1) if n >= 2 else None
    out = []
    for x in range(n):
        tgt = np.full(n * (n - 1) // 2, -1, dtype=np.int64)
        for b in range(1, n):
            for a in range(b):
                if x not in (a, b):
                    tgt[b * (b - 1) // 2 + a] = pt[_shift(a, x), _shift(b, x)]
        tgt.setflags(write=False)
        out.append((x, tgt))
    return tuple(out)
