"""Minor containment, pendant appearances and disjoint-copy packing."""
from __future__ import annotations

from itertools import combinations

from .canon import certificate, rooted_certificate
from .graph import Graph, RootedGraph, SizeCapExceeded, _bits, bridges, components, core2

MINOR_CAP = 10

_memo: dict[tuple, bool] = {}


def has_spanning_subgraph(g: Graph, h: Graph) -> bool:
    """True iff ``h`` is isomorphic to a spanning subgraph of ``g`` (same order)."""
    if g.n != h.n or g.num_edges < h.num_edges:
        return False
    dg = sorted(g.degrees(), reverse=True)
    dh = sorted(h.degrees(), reverse=True)
    if any(a < b for a, b in zip(dg, dh)):
        return False
    order = sorted(range(h.n), key=lambda v: -bin(h.rows[v]).count("1"))
    image = [-1] * h.n
    used = 0
    gdeg = g.degrees()

    def extend(k: int) -> bool:
        nonlocal used
        if k == h.n:
            return True
        v = order[k]
        need = 0
        for u in _bits(h.rows[v]):
            if image[u] >= 0:
                need |= 1 << image[u]
        dv = bin(h.rows[v]).count("1")
        for x in range(g.n):
            if (used >> x) & 1 or gdeg[x] < dv or g.rows[x] & need != need:
                continue
            image[v] = x
            used |= 1 << x
            if extend(k + 1):
                return True
            used &= ~(1 << x)
            image[v] = -1
        return False

    return extend(0)


def _reduce(g: Graph, hmin: int, h_isolated: int) -> Graph:
    if h_isolated == 0:
        iso = [v for v in g.vertices() if g.degree(v) == 0]
        if iso:
            g = g.remove_vertices(iso)
    if hmin >= 2:
        g = core2(g)
    if hmin >= 3:
        while True:
            for v in g.vertices():
                if g.degree(v) == 2:
                    g = g.contract(g.neighbors(v)[0], v)
                    break
            else:
                break
    return g


def _search(g: Graph, h: Graph, hkey, hmin: int, h_isolated: int) -> bool:
    g = _reduce(g, hmin, h_isolated)
    if g.n < h.n or g.num_edges < h.num_edges:
        return False
    key = (hkey, certificate(g))
    hit = _memo.get(key)
    if hit is not None:
        return hit
    if g.n == h.n:
        ans = has_spanning_subgraph(g, h)
    else:
        ans = False
        for v in g.vertices():
            if _search(g.remove_vertices([v]), h, hkey, hmin, h_isolated):
                ans = True
                break
        if not ans:
            for u, v in g.edges():
                if _search(g.contract(u, v), h, hkey, hmin, h_isolated):
                    ans = True
                    break
    _memo[key] = ans
    return ans


def contains_minor(g: Graph, h: Graph, cap: int = MINOR_CAP) -> bool:
    """True iff ``h`` is a minor of ``g``."""
    if g.n > cap:
        raise SizeCapExceeded(f"minor search is capped at {cap} vertices, got {g.n}")
    if h.n == 0:
        return True
    hdeg = h.degrees()
    hmin = min(hdeg)
    h_isolated = sum(1 for d in hdeg if d == 0)
    return _search(g, h, certificate(h), hmin, h_isolated)


def clear_minor_cache() -> None:
    _memo.clear()


def pendant_appearances(g: Graph, h: RootedGraph) -> list[tuple[tuple[int, int], frozenset[int]]]:
    """Bridges ``e`` of ``g`` with one side a rooted copy of ``h`` whose root meets ``e``."""
    want = rooted_certificate(h.graph, h.root)
    out = []
    for a, b in bridges(g):
        cut = g.remove_edge(a, b)
        for x in (a, b):
            side = next(c for c in components(cut) if x in c)
            if len(side) != h.graph.n:
                continue
            sub = g.induced(side)
            root = sorted(side).index(x) + 1
            if sub.num_edges == h.graph.num_edges and rooted_certificate(sub, root) == want:
                out.append(((a, b), side))
    return out


def copy_vertex_sets(g: Graph, h: Graph) -> list[int]:
    """Vertex masks W with |W| = v(h) such that g[W] has a spanning copy of h."""
    out = []
    for w in combinations(range(1, g.n + 1), h.n):
        if has_spanning_subgraph(g.induced(w), h):
            m = 0
            for v in w:
                m |= 1 << (v - 1)
            out.append(m)
    return out


def max_disjoint_copies(g: Graph, h: Graph) -> int:
    """Maximum number of vertex-disjoint (not necessarily induced) copies of ``h`` in ``g``."""
    if h.n == 0:
        raise ValueError("h must have at least one vertex")
    sets = copy_vertex_sets(g, h)
    if not sets:
        return 0
    by_low: dict[int, list[int]] = {}
    for s in sets:
        by_low.setdefault((s & -s).bit_length() - 1, []).append(s)
    best = 0

    def search(avail: int, count: int) -> None:
        nonlocal best
        if count + bin(avail).count("1") // h.n <= best:
            return
        if not avail:
            best = max(best, count)
            return
        v = (avail & -avail).bit_length() - 1
        for s in by_low.get(v, ()):
            if s & avail == s:
                search(avail & ~s, count + 1)
        best = max(best, count)
        search(avail & ~(1 << v), count)

    search((1 << g.n) - 1, 0)
    return best
