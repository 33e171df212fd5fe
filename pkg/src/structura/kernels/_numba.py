"""numba-compiled kernels; signatures mirror ``_numpy``."""
from __future__ import annotations

import numpy as np
from numba import njit

from ._tables import contraction_targets, deletion_targets, pair_table


@njit(cache=True)
def _features(n, start, stop, pt, edges, ncomp, big, core, mindeg):
    nb = np.zeros(n, dtype=np.int64)
    full = (1 << n) - 1
    for idx in range(stop - start):
        m = start + idx
        for v in range(n):
            nb[v] = 0
        e = 0
        for j in range(1, n):
            for i in range(j):
                if (m >> pt[i, j]) & 1:
                    nb[i] |= 1 << j
                    nb[j] |= 1 << i
                    e += 1
        edges[idx] = e
        md = n
        for v in range(n):
            d = 0
            x = nb[v]
            while x:
                x &= x - 1
                d += 1
            if d < md:
                md = d
        mindeg[idx] = md if n > 0 else 0

        seen = 0
        comps = 0
        best = 0
        bigm = 0
        for v in range(n):
            if (seen >> v) & 1:
                continue
            comp = 1 << v
            frontier = comp
            while frontier:
                nxt = 0
                f = frontier
                while f:
                    low = f & -f
                    u = 0
                    while (low >> u) != 1:
                        u += 1
                    nxt |= nb[u]
                    f ^= low
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            comps += 1
            sz = 0
            x = comp
            while x:
                x &= x - 1
                sz += 1
            if sz > best:
                best = sz
                bigm = comp
        ncomp[idx] = comps
        big[idx] = bigm

        alive = full
        changed = True
        while changed:
            changed = False
            for v in range(n):
                if (alive >> v) & 1:
                    x = nb[v] & alive
                    d = 0
                    while x:
                        x &= x - 1
                        d += 1
                    if d < 2:
                        alive &= ~(1 << v)
                        changed = True
        core[idx] = alive


def mask_features(n: int, start: int, stop: int) -> dict[str, np.ndarray]:
    size = stop - start
    vt = np.uint8 if n <= 8 else np.uint16
    out = {
        "edges": np.zeros(size, dtype=np.uint8),
        "ncomp": np.zeros(size, dtype=np.uint8),
        "big": np.zeros(size, dtype=vt),
        "core": np.zeros(size, dtype=vt),
        "mindeg": np.zeros(size, dtype=np.uint8),
    }
    if n == 0:
        return out
    _features(n, start, stop, pair_table(n), out["edges"], out["ncomp"], out["big"], out["core"], out["mindeg"])
    return out


@njit(cache=True)
def _induced(n, pt, masks, vmasks, out):
    rank = np.zeros(n, dtype=np.int64)
    for k in range(masks.size):
        m = masks[k]
        w = vmasks[k]
        r = 0
        for v in range(n):
            rank[v] = r
            if (w >> v) & 1:
                r += 1
        res = 0
        for j in range(1, n):
            if not (w >> j) & 1:
                continue
            for i in range(j):
                if (w >> i) & 1 and (m >> pt[i, j]) & 1:
                    res |= 1 << (rank[j] * (rank[j] - 1) // 2 + rank[i])
        out[k] = res


def induced_submasks(n: int, masks: np.ndarray, vmasks: np.ndarray) -> np.ndarray:
    out = np.zeros(masks.size, dtype=np.int64)
    if n:
        _induced(n, pair_table(n), masks.astype(np.int64), vmasks.astype(np.int64), out)
    return out


def _byte_tables(targets_list, m):
    nbytes = max(1, (m + 7) // 8)
    tab = np.zeros((len(targets_list), nbytes, 256), dtype=np.int64)
    for k, tgt in enumerate(targets_list):
        for byte in range(nbytes):
            for val in range(256):
                acc = 0
                for bit in range(8):
                    b = byte * 8 + bit
                    if b < m and (val >> bit) & 1 and tgt[b] >= 0:
                        acc |= 1 << int(tgt[b])
                tab[k, byte, val] = acc
    return tab


@njit(cache=True)
def _minor_seed(m, out, prev, edge_bits, ctab, incidence, dtab):
    nbytes = ctab.shape[1]
    for mask in range(1 << m):
        if out[mask]:
            continue
        hit = False
        for k in range(edge_bits.size):
            if (mask >> edge_bits[k]) & 1:
                img = 0
                for byte in range(nbytes):
                    img |= ctab[k, byte, (mask >> (8 * byte)) & 255]
                if prev[img]:
                    hit = True
                    break
        if not hit:
            for x in range(incidence.size):
                if mask & incidence[x] == 0:
                    img = 0
                    for byte in range(nbytes):
                        img |= dtab[x, byte, (mask >> (8 * byte)) & 255]
                    if prev[img]:
                        hit = True
                        break
        if hit:
            out[mask] = True


@njit(cache=True)
def _closure(out, m):
    for b in range(m):
        bit = 1 << b
        for mask in range(1 << m):
            if mask & bit and not out[mask] and out[mask ^ bit]:
                out[mask] = True


def upward_closure(bitmap: np.ndarray, m: int) -> None:
    _closure(bitmap, m)


def minor_level(n: int, prev: np.ndarray | None, base_masks: np.ndarray) -> np.ndarray:
    m = n * (n - 1) // 2
    out = np.zeros(1 << m, dtype=np.bool_)
    out[base_masks] = True
    if prev is not None:
        ct = contraction_targets(n)
        dt = deletion_targets(n)
        pt = pair_table(n)
        edge_bits = np.array([pt[u, v] for (u, v), _ in ct], dtype=np.int64)
        ctab = _byte_tables([t for _, t in ct], m)
        dtab = _byte_tables([t for _, t in dt], m)
        incidence = np.zeros(n, dtype=np.int64)
        for x in range(n):
            for y in range(n):
                if y != x:
                    incidence[x] |= 1 << int(pt[x, y])
        _minor_seed(m, out, prev, edge_bits, ctab, incidence, dtab)
    _closure(out, m)
    return out


@njit(cache=True)
def _next_perm(a, s, e):
    i = e - 2
    while i >= s and a[i] >= a[i + 1]:
        i -= 1
    if i < s:
        lo, hi = s, e - 1
        while lo < hi:
            a[lo], a[hi] = a[hi], a[lo]
            lo += 1
            hi -= 1
        return False
    j = e - 1
    while a[j] <= a[i]:
        j -= 1
    a[i], a[j] = a[j], a[i]
    lo, hi = i + 1, e - 1
    while lo < hi:
        a[lo], a[hi] = a[hi], a[lo]
        lo += 1
        hi -= 1
    return True


@njit(cache=True)
def _canon(adj, bounds, arr, members):
    n = arr.size
    ncells = bounds.size - 1
    lab = np.zeros(n, dtype=np.int64)
    best_lab = np.zeros(n, dtype=np.int64)
    used = np.zeros(members.shape[0], dtype=np.int64)
    best = -1
    count = 0
    while True:
        used[:] = 0
        for p in range(n):
            c = arr[p]
            lab[p] = members[c, used[c]]
            used[c] += 1
        code = 0
        for p in range(n):
            for q in range(p + 1, n):
                code = (code << 1) | adj[lab[p], lab[q]]
        if best < 0 or code < best:
            best = code
            count = 1
            best_lab[:] = lab
        elif code == best:
            count += 1
        c = ncells - 1
        while c >= 0:
            if _next_perm(arr, bounds[c], bounds[c + 1]):
                break
            c -= 1
        if c < 0:
            break
    return best_lab, count


def canon_search(rows: np.ndarray, cells: list[list[int]], classes: list[list[int]]):
    n = rows.size
    adj = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        r = int(rows[i])
        for j in range(n):
            adj[i, j] = (r >> j) & 1
    bounds = np.zeros(len(cells) + 1, dtype=np.int64)
    arr = np.zeros(n, dtype=np.int64)
    p = 0
    for k, cell in enumerate(cells):
        for c in sorted(cell):
            arr[p] = c
            p += 1
        bounds[k + 1] = p
    width = max((len(c) for c in classes), default=1)
    members = np.zeros((max(len(classes), 1), width), dtype=np.int64)
    for c, vs in enumerate(classes):
        members[c, : len(vs)] = vs
    lab, count = _canon(adj, bounds, arr, members)
    return lab, int(count)


@njit(cache=True)
def _poisson(mu, u, out):
    rows, cols = u.shape
    for j in range(cols):
        base = np.exp(-mu[j])
        for i in range(rows):
            p = base
            s = p
            k = 0
            x = u[i, j]
            while x > s and k < 1000:
                k += 1
                p *= mu[j] / k
                s += p
            out[i, j] = k


def poisson_inversion(mu: np.ndarray, u: np.ndarray) -> np.ndarray:
    out = np.zeros(u.shape, dtype=np.int64)
    _poisson(np.asarray(mu, dtype=np.float64), np.ascontiguousarray(u, dtype=np.float64), out)
    return out
