"""Vectorised numpy versions of the enumeration kernels.

Every function here has a twin in ``_numba`` with the same signature and the
same output; the test-suite compares them on all masks for small n.
"""
from __future__ import annotations

from itertools import product

import numpy as np

from ._tables import POP8, contraction_targets, deletion_targets, pair_table


def _popcount8(x: np.ndarray) -> np.ndarray:
    return POP8[x]


def _vdtype(n: int):
    return np.uint8 if n <= 8 else np.uint16


def mask_features(n: int, start: int, stop: int) -> dict[str, np.ndarray]:
    """Per-mask structure for the labeled graphs with masks in [start, stop).

    Returns arrays ``edges``, ``ncomp``, ``big`` (vertex mask of the largest
    component, ties to the smaller least vertex), ``core`` (vertex mask of the
    2-core) and ``mindeg``.
    """
    masks = np.arange(start, stop, dtype=np.int64)
    size = masks.size
    vt = _vdtype(n)
    if n == 0:
        z = np.zeros(size, dtype=np.uint8)
        return {"edges": z.copy(), "ncomp": z.copy(), "big": z.astype(vt), "core": z.astype(vt), "mindeg": z.copy()}
    pt = pair_table(n)
    nb = np.zeros((n, size), dtype=np.int64)
    for v in range(n):
        for u in range(n):
            if u != v:
                nb[v] |= ((masks >> pt[u, v]) & 1) << u
    nb = nb.astype(vt)
    deg = np.stack([_popcount8(nb[v]) if n <= 8 else _pop16(nb[v]) for v in range(n)])
    edges = (deg.sum(axis=0) // 2).astype(np.uint8)
    mindeg = deg.min(axis=0).astype(np.uint8)

    reach = np.stack([nb[v] | vt(1 << v) for v in range(n)])
    rounds = max(1, int(np.ceil(np.log2(max(n, 2)))) + 1)
    for _ in range(rounds):
        new = reach.copy()
        for v in range(n):
            for u in range(n):
                hit = ((reach[v] >> u) & 1).astype(bool)
                new[v] = np.where(hit, new[v] | reach[u], new[v])
        reach = new

    is_root = np.zeros((n, size), dtype=bool)
    for v in range(n):
        below = vt((1 << v) - 1)
        is_root[v] = (reach[v] & below) == 0
    ncomp = is_root.sum(axis=0).astype(np.uint8)
    big = np.zeros(size, dtype=vt)
    best = np.zeros(size, dtype=np.int64)
    for v in range(n):
        sz = _popcount8(reach[v]) if n <= 8 else _pop16(reach[v])
        take = is_root[v] & (sz > best)
        big = np.where(take, reach[v], big)
        best = np.where(take, sz, best)

    alive = np.full(size, (1 << n) - 1, dtype=vt)
    for _ in range(n):
        for v in range(n):
            d = _popcount8(nb[v] & alive) if n <= 8 else _pop16(nb[v] & alive)
            drop = d < 2
            alive = np.where(drop, alive & vt(~(1 << v) & ((1 << n) - 1)), alive)
    return {"edges": edges, "ncomp": ncomp, "big": big, "core": alive, "mindeg": mindeg}


def _pop16(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint16)
    return POP8[x & 0xFF] + POP8[x >> 8]


def induced_submasks(n: int, masks: np.ndarray, vmasks: np.ndarray) -> np.ndarray:
    """Edge mask of G[W] relabeled order-preservingly, for each (mask, W) pair."""
    masks = masks.astype(np.int64)
    vmasks = vmasks.astype(np.int64)
    rank = np.zeros((n, masks.size), dtype=np.int64)
    for v in range(1, n):
        rank[v] = rank[v - 1] + ((vmasks >> (v - 1)) & 1)
    out = np.zeros(masks.size, dtype=np.int64)
    pt = pair_table(n)
    for j in range(1, n):
        for i in range(j):
            present = ((masks >> pt[i, j]) & 1) & ((vmasks >> i) & 1) & ((vmasks >> j) & 1)
            tgt = rank[j] * (rank[j] - 1) // 2 + rank[i]
            out |= present << np.where(present == 1, tgt, 0)
    return out


def _remap(masks: np.ndarray, targets: np.ndarray) -> np.ndarray:
    out = np.zeros(masks.size, dtype=np.int64)
    for b, t in enumerate(targets):
        if t >= 0:
            out |= ((masks >> b) & 1) << t
    return out


def upward_closure(bitmap: np.ndarray, m: int) -> None:
    """In place: set bitmap[x] when bitmap[y] holds for some y whose edges are a subset of x."""
    for b in range(m):
        view = bitmap.reshape(-1, 2, 1 << b)
        view[:, 1, :] |= view[:, 0, :]


def minor_level(n: int, prev: np.ndarray | None, base_masks: np.ndarray) -> np.ndarray:
    """Bitmap over masks on [n] of graphs having a fixed H as a minor.

    ``prev`` is the bitmap for n - 1 (None when n - 1 < v(H)); ``base_masks``
    lists the labeled copies of H on [n] when n == v(H), else is empty.
    """
    m = n * (n - 1) // 2
    masks = np.arange(1 << m, dtype=np.int64)
    out = np.zeros(1 << m, dtype=bool)
    out[base_masks] = True
    if prev is not None:
        for (u, v), targets in contraction_targets(n):
            e = pair_table(n)[u, v]
            sel = masks[((masks >> e) & 1) == 1]
            out[sel] |= prev[_remap(sel, targets)]
        for x, targets in deletion_targets(n):
            inc = 0
            for y in range(n):
                if y != x:
                    inc |= 1 << int(pair_table(n)[x, y])
            sel = masks[(masks & inc) == 0]
            out[sel] |= prev[_remap(sel, targets)]
    upward_closure(out, m)
    return out


def canon_search(rows: np.ndarray, cells: list[list[int]], classes: list[list[int]]):
    """Minimum row-major code over cell-respecting labelings.

    ``cells`` is the ordered list of cells (each a list of twin-class ids,
    repeated once per member); ``classes[c]`` lists the vertices of twin class c
    in ascending order.  Returns (best labeling, number of optimal
    arrangements).
    """
    n = rows.size
    adj = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            adj[i, j] = (int(rows[i]) >> j) & 1
    per_cell = [list(distinct_permutations(c)) for c in cells]
    best_code = None
    best_lab = None
    count = 0
    # arrangements are enumerated in chunks so the product never materialises whole
    chunk: list[list[int]] = []

    def flush(chunk):
        nonlocal best_code, best_lab, count
        labs = np.array(chunk, dtype=np.int64)
        code = np.zeros(labs.shape[0], dtype=np.int64)
        for p in range(n):
            for q in range(p + 1, n):
                code = (code << 1) | adj[labs[:, p], labs[:, q]]
        lo = code.min()
        hits = np.flatnonzero(code == lo)
        if best_code is None or lo < best_code:
            best_code, best_lab, count = lo, labs[hits[0]].copy(), hits.size
        elif lo == best_code:
            count += hits.size

    for combo in product(*per_cell):
        used = [0] * len(classes)
        lab = []
        for arrangement in combo:
            for c in arrangement:
                lab.append(classes[c][used[c]])
                used[c] += 1
        chunk.append(lab)
        if len(chunk) >= 65536:
            flush(chunk)
            chunk = []
    if chunk:
        flush(chunk)
    return best_lab, count


def distinct_permutations(items):
    """Distinct orderings of a multiset in lexicographic order."""
    a = sorted(items)
    n = len(a)
    while True:
        yield tuple(a)
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])


def poisson_inversion(mu: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Poisson(mu[j]) variates by sequential-search inversion of uniforms u[:, j]."""
    mu = np.asarray(mu, dtype=np.float64)
    k = np.zeros(u.shape, dtype=np.int64)
    p = np.broadcast_to(np.exp(-mu), u.shape).copy()
    s = p.copy()
    active = u > s
    step = 0
    while active.any():
        step += 1
        k[active] += 1
        p = np.where(active, p * mu / step, p)
        s = np.where(active, s + p, s)
        active &= u > s
        if step > 1000:
            break
    return k
